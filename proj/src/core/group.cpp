#include "core/group.hpp"

#include <numeric>

#include "core/errors.hpp"
#include "core/sha256.hpp"

namespace privdist {

namespace {

// RFC 3526 MODP primes. All are safe primes with p = 7 mod 8, so g = 2 is a
// quadratic residue and generates the order-q subgroup.
const char* kModp1536 =
    "ffffffffffffffffc90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74"
    "020bbea63b139b22514a08798e3404ddef9519b3cd3a431b302b0a6df25f1437"
    "4fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7ed"
    "ee386bfb5a899fa5ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf05"
    "98da48361c55d39a69163fa8fd24cf5f83655d23dca3ad961c62f356208552bb"
    "9ed529077096966d670c354e4abc9804f1746c08ca237327ffffffffffffffff";

const char* kModp2048 =
    "ffffffffffffffffc90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74"
    "020bbea63b139b22514a08798e3404ddef9519b3cd3a431b302b0a6df25f1437"
    "4fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7ed"
    "ee386bfb5a899fa5ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf05"
    "98da48361c55d39a69163fa8fd24cf5f83655d23dca3ad961c62f356208552bb"
    "9ed529077096966d670c354e4abc9804f1746c08ca18217c32905e462e36ce3b"
    "e39e772c180e86039b2783a2ec07a28fb5c55df06f4c52c9de2bcbf695581718"
    "3995497cea956ae515d2261898fa051015728e5a8aacaa68ffffffffffffffff";

const char* kModp3072 =
    "ffffffffffffffffc90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74"
    "020bbea63b139b22514a08798e3404ddef9519b3cd3a431b302b0a6df25f1437"
    "4fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7ed"
    "ee386bfb5a899fa5ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf05"
    "98da48361c55d39a69163fa8fd24cf5f83655d23dca3ad961c62f356208552bb"
    "9ed529077096966d670c354e4abc9804f1746c08ca18217c32905e462e36ce3b"
    "e39e772c180e86039b2783a2ec07a28fb5c55df06f4c52c9de2bcbf695581718"
    "3995497cea956ae515d2261898fa051015728e5a8aaac42dad33170d04507a33"
    "a85521abdf1cba64ecfb850458dbef0a8aea71575d060c7db3970f85a6e1e4c7"
    "abf5ae8cdb0933d71e8c94e04a25619dcee3d2261ad2ee6bf12ffa06d98a0864"
    "d87602733ec86a64521f2b18177b200cbbe117577a615d6c770988c0bad946e2"
    "08e24fa074e5ab3143db5bfce0fd108e4b82d120a93ad2caffffffffffffffff";

// A Baillie-PSW test plus 64 Miller-Rabin rounds; composite acceptance
// probability below 2^-128.
bool probably_prime(const Int& n, int mr_rounds = 64) {
  return mpz_probab_prime_p(n.get_mpz_t(), mr_rounds + 24) != 0;
}

GroupParams make_checked(Int p, Int g) {
  GroupParams gp;
  gp.p = std::move(p);
  gp.g = std::move(g);
  gp.q = (gp.p - 1) / 2;
  if (gp.p != 2 * gp.q + 1) fail(Err::Internal, "p != 2q+1");
  if (gp.g <= 1 || gp.g >= gp.p) fail(Err::InvalidArgument, "generator out of range");
  if (pow_mod(gp.g, gp.q, gp.p) != 1)
    fail(Err::InvalidArgument, "g does not generate the order-q subgroup");
  return gp;
}

Int hash_to_int(std::span<const uint8_t> msg, const Int& modulus) {
  Digest d = sha256(msg);
  return from_bytes(d) % modulus;
}

}  // namespace

GroupParams GroupParams::standard(const std::string& name) {
  if (name == "test-23") return make_checked(Int(23), Int(2));
  if (name == "modp-1536") return make_checked(from_hex(kModp1536), Int(2));
  if (name == "modp-2048") return make_checked(from_hex(kModp2048), Int(2));
  if (name == "modp-3072") return make_checked(from_hex(kModp3072), Int(2));
  fail(Err::UnknownGroup, "unknown group: " + name);
}

const std::vector<std::string>& GroupParams::standard_names() {
  static const std::vector<std::string> names = {"test-23", "modp-1536",
                                                 "modp-2048", "modp-3072"};
  return names;
}

GroupParams GroupParams::generate(unsigned bits, Rng& rng) {
  if (bits < 8) fail(Err::BitsTooSmall, "group size below 8 bits");
  while (true) {
    Int q = rng.exact_bits(bits - 1);
    mpz_setbit(q.get_mpz_t(), 0);
    // p = 2q+1 is divisible by 3 whenever q = 1 mod 3.
    if (bits > 4 && q % 3 == 1) continue;
    if (!probably_prime(q, 2)) continue;
    Int p = 2 * q + 1;
    if (!probably_prime(p, 2)) continue;
    if (!probably_prime(q) || !probably_prime(p)) continue;
    // Squares of random elements cover the order-q subgroup.
    Int g;
    do {
      Int h = rng.range(Int(2), p - 2);
      g = h * h % p;
    } while (g == 1);
    return make_checked(std::move(p), std::move(g));
  }
}

GroupParams GroupParams::from_parts(Int p, Int g, bool check_primality) {
  if (p < 5 || p % 2 == 0) fail(Err::InvalidArgument, "modulus is not an odd prime");
  if (check_primality) {
    bool trusted = false;
    for (const auto& name : standard_names()) {
      GroupParams known = standard(name);
      if (known.p == p && known.g == g) trusted = true;
    }
    if (!trusted) {
      Int q = (p - 1) / 2;
      if (!probably_prime(p) || !probably_prime(q))
        fail(Err::InvalidArgument, "modulus is not a safe prime");
    }
  }
  return make_checked(std::move(p), std::move(g));
}

unsigned GroupParams::bits() const {
  return static_cast<unsigned>(mpz_sizeinbase(p.get_mpz_t(), 2));
}

size_t GroupParams::element_width() const { return (bits() + 7) / 8; }

EncKeyPair keygen(const GroupParams& gp, Rng& rng, ExpCounter* counter) {
  Int s = rng.range(Int(1), gp.q - 1);
  return {s, pow_mod(gp.g, s, gp.p, counter)};
}

Ciphertext encrypt_with(const GroupParams& gp, const Int& y, const Int& m,
                        const Int& r, ExpCounter* counter) {
  if (!gp.is_element(m)) fail(Err::Range, "plaintext out of range [1, p-1]");
  if (r < 0 || r >= gp.q) fail(Err::Range, "encryption nonce out of range [0, q-1]");
  if (r == 0) return {Int(1), m};
  Int c1 = pow_mod(gp.g, r, gp.p, counter);
  Int c2 = m * pow_mod(y, r, gp.p, counter) % gp.p;
  return {std::move(c1), std::move(c2)};
}

Ciphertext encrypt(const GroupParams& gp, const Int& y, const Int& m, Rng& rng,
                   ExpCounter* counter) {
  return encrypt_with(gp, y, m, rng.range(Int(1), gp.q - 1), counter);
}

Int decrypt(const GroupParams& gp, const Int& s, const Ciphertext& ct,
            ExpCounter* counter) {
  if (!gp.is_element(ct.c1) || !gp.is_element(ct.c2))
    fail(Err::MalformedCiphertext, "ciphertext component out of range");
  Int blind = pow_mod(ct.c1, s, gp.p, counter);
  return ct.c2 * invert_mod(blind, gp.p) % gp.p;
}

Ciphertext hom_mul(const GroupParams& gp, const Ciphertext& a, const Ciphertext& b) {
  return {a.c1 * b.c1 % gp.p, a.c2 * b.c2 % gp.p};
}

SigKeyPair sig_keygen(const GroupParams& gp, Rng& rng, ExpCounter* counter) {
  Int x = rng.range(Int(1), gp.p - 2);
  return {x, pow_mod(gp.g, x, gp.p, counter)};
}

Signature sign(const GroupParams& gp, const SigKeyPair& key,
               std::span<const uint8_t> msg, Rng& rng, ExpCounter* counter) {
  if (msg.empty()) fail(Err::InvalidArgument, "refusing to sign an empty message");
  Int pm1 = gp.p - 1;
  Int h = hash_to_int(msg, pm1);
  while (true) {
    Int k = rng.range(Int(1), pm1 - 1);
    if (gcd(k, pm1) != 1) continue;
    Int r = pow_mod(gp.g, k, gp.p, counter);
    Int s = invert_mod(k, pm1) * ((h - key.x * r) % pm1) % pm1;
    if (s < 0) s += pm1;
    if (s == 0) continue;
    return {std::move(r), std::move(s)};
  }
}

bool verify(const GroupParams& gp, const Int& v, std::span<const uint8_t> msg,
            const Signature& sig, ExpCounter* counter) {
  if (!gp.is_element(v)) return false;
  if (sig.r < 1 || sig.r >= gp.p) return false;
  if (sig.s < 0 || sig.s >= gp.p - 1) return false;
  Int h = hash_to_int(msg, gp.p - 1);
  Int lhs = pow_mod(gp.g, h, gp.p, counter);
  Int rhs = pow_mod(v, sig.r, gp.p, counter) *
            pow_mod(sig.r, sig.s, gp.p, counter) % gp.p;
  return lhs == rhs;
}

std::vector<uint8_t> ciphertext_bytes(const GroupParams& gp, const Ciphertext& ct) {
  size_t w = gp.element_width();
  std::vector<uint8_t> out = to_fixed_bytes(ct.c1, w);
  std::vector<uint8_t> c2 = to_fixed_bytes(ct.c2, w);
  out.insert(out.end(), c2.begin(), c2.end());
  return out;
}

}  // namespace privdist
