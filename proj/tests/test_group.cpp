#include <doctest.h>

#include <set>

#include "core/group.hpp"
#include "core/rng.hpp"
#include "test_util.hpp"

using namespace privdist;
using privdist::testing::code_of;

namespace {

// Brute-force multiplicative order, usable only for tiny groups.
unsigned order_of(const Int& x, const Int& p) {
  Int acc = x % p;
  unsigned k = 1;
  while (acc != 1) {
    acc = acc * x % p;
    ++k;
  }
  return k;
}

std::vector<uint8_t> bytes_of(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

}  // namespace

TEST_CASE("standard group test-23") {
  GroupParams gp = GroupParams::standard("test-23");
  CHECK(gp.p == 23);
  CHECK(gp.q == 11);
  CHECK(gp.g == 2);
  // brute-force order check over Z*_23
  CHECK(order_of(gp.g, gp.p) == 11);
  CHECK(pow_mod(gp.g, gp.q, gp.p) == 1);
  CHECK(gp.element_width() == 1);
}

TEST_CASE("standard group modp-2048 passes the big-integer oracle") {
  GroupParams gp = GroupParams::standard("modp-2048");
  CHECK(gp.bits() == 2048);
  CHECK(gp.p == 2 * gp.q + 1);
  CHECK(gp.g == 2);
  CHECK(pow_mod(gp.g, gp.q, gp.p) == 1);
  // independent primality verdict on both p and q
  CHECK(mpz_probab_prime_p(gp.p.get_mpz_t(), 88) != 0);
  CHECK(mpz_probab_prime_p(gp.q.get_mpz_t(), 88) != 0);
}

TEST_CASE("unknown group name") {
  CHECK(code_of([] { GroupParams::standard("nonsense"); }) == Err::UnknownGroup);
}

TEST_CASE("group generation") {
  Rng rng = Rng::from_seed(1234);
  for (unsigned bits : {16u, 8u, 24u}) {
    GroupParams gp = GroupParams::generate(bits, rng);
    CHECK(gp.bits() == bits);
    CHECK(gp.p == 2 * gp.q + 1);
    CHECK(mpz_probab_prime_p(gp.p.get_mpz_t(), 40) != 0);
    CHECK(mpz_probab_prime_p(gp.q.get_mpz_t(), 40) != 0);
    CHECK(gp.g != 1);
    CHECK(pow_mod(gp.g, gp.q, gp.p) == 1);
  }
  CHECK(code_of([&] { GroupParams::generate(4, rng); }) == Err::BitsTooSmall);
}

TEST_CASE("from_parts validates the subgroup") {
  GroupParams gp = GroupParams::from_parts(Int(23), Int(2));
  CHECK(gp.q == 11);
  // 5 generates all of Z*_23 (order 22), not the order-11 subgroup
  CHECK(code_of([] { GroupParams::from_parts(Int(23), Int(5)); }) == Err::InvalidArgument);
  CHECK(code_of([] { GroupParams::from_parts(Int(25), Int(2)); }) == Err::InvalidArgument);
}

TEST_CASE("keygen derives y = g^s") {
  GroupParams gp = GroupParams::standard("test-23");
  // forced exponents
  CHECK(pow_mod(gp.g, Int(5), gp.p) == 9);
  CHECK(pow_mod(gp.g, Int(1), gp.p) == gp.g);

  Rng rng = Rng::from_entropy();
  std::set<std::string> seen;
  for (int i = 0; i < 16; ++i) {
    EncKeyPair kp = keygen(gp, rng);
    CHECK(kp.s >= 1);
    CHECK(kp.s <= gp.q - 1);
    CHECK(pow_mod(gp.g, kp.s, gp.p) == kp.y);
    seen.insert(kp.s.get_str());
  }
  CHECK(seen.size() > 1);  // fresh randomness gives distinct keys
}

TEST_CASE("encryption test vectors in test-23") {
  GroupParams gp = GroupParams::standard("test-23");
  Int y = 9;  // s = 5

  CHECK(encrypt_with(gp, y, Int(4), Int(3)) == Ciphertext{Int(8), Int(18)});
  CHECK(encrypt_with(gp, y, Int(7), Int(0)) == Ciphertext{Int(1), Int(7)});
  CHECK(encrypt_with(gp, y, Int(3), Int(1)) == Ciphertext{Int(2), Int(4)});

  CHECK(code_of([&] { encrypt_with(gp, y, Int(0), Int(3)); }) == Err::Range);
  CHECK(code_of([&] { encrypt_with(gp, y, Int(23), Int(3)); }) == Err::Range);
  CHECK(code_of([&] { encrypt_with(gp, y, Int(4), Int(11)); }) == Err::Range);
  CHECK(code_of([&] { encrypt_with(gp, y, Int(4), Int(-1)); }) == Err::Range);
}

TEST_CASE("decryption test vectors and roundtrip") {
  GroupParams gp = GroupParams::standard("test-23");
  Int s = 5, y = 9;

  CHECK(decrypt(gp, s, {Int(8), Int(18)}) == 4);
  for (Int m = 1; m < gp.p; ++m)
    CHECK(decrypt(gp, s, {Int(1), m}) == m);  // r = 0 form

  Rng rng = Rng::from_seed(99);
  for (int i = 0; i < 1000; ++i) {
    Int m = rng.range(Int(1), gp.p - 1);
    CHECK(decrypt(gp, s, encrypt(gp, y, m, rng)) == m);
  }

  CHECK(code_of([&] { decrypt(gp, s, {Int(0), Int(5)}); }) == Err::MalformedCiphertext);
  CHECK(code_of([&] { decrypt(gp, s, {Int(5), Int(23)}); }) == Err::MalformedCiphertext);
}

TEST_CASE("homomorphic multiplication") {
  GroupParams gp = GroupParams::standard("test-23");
  Int s = 5, y = 9;

  Ciphertext a = encrypt_with(gp, y, Int(3), Int(1));  // (2, 4)
  Ciphertext b = encrypt_with(gp, y, Int(4), Int(3));  // (8, 18)
  Ciphertext prod = hom_mul(gp, a, b);
  CHECK(prod == Ciphertext{Int(16), Int(3)});
  CHECK(decrypt(gp, s, prod) == 12);  // 3*4 mod 23

  // (1,1) encrypts 1 with r = 0 and acts as the identity
  CHECK(hom_mul(gp, a, {Int(1), Int(1)}) == a);

  Rng rng = Rng::from_seed(7);
  for (int i = 0; i < 500; ++i) {
    Int m1 = rng.range(Int(1), gp.p - 1);
    Int m2 = rng.range(Int(1), gp.p - 1);
    Ciphertext c = hom_mul(gp, encrypt(gp, y, m1, rng), encrypt(gp, y, m2, rng));
    CHECK(decrypt(gp, s, c) == m1 * m2 % gp.p);
  }
}

TEST_CASE("hom_mul is associative and commutative under decryption") {
  GroupParams gp = GroupParams::standard("test-23");
  Rng rng = Rng::from_seed(11);
  EncKeyPair kp = keygen(gp, rng);

  for (int trial = 0; trial < 50; ++trial) {
    size_t k = 2 + rng.below_u64(5);  // up to 6 factors
    std::vector<Int> plain;
    std::vector<Ciphertext> cts;
    Int expected = 1;
    for (size_t i = 0; i < k; ++i) {
      plain.push_back(rng.range(Int(1), gp.p - 1));
      cts.push_back(encrypt(gp, kp.y, plain.back(), rng));
      expected = expected * plain.back() % gp.p;
    }
    // left fold
    Ciphertext left = cts[0];
    for (size_t i = 1; i < k; ++i) left = hom_mul(gp, left, cts[i]);
    // right fold over a shuffled order
    std::vector<size_t> order(k);
    for (size_t i = 0; i < k; ++i) order[i] = i;
    for (size_t i = k; i > 1; --i) std::swap(order[i - 1], order[rng.below_u64(i)]);
    Ciphertext right = cts[order[k - 1]];
    for (size_t i = k - 1; i > 0; --i) right = hom_mul(gp, cts[order[i - 1]], right);

    CHECK(decrypt(gp, kp.s, left) == expected);
    CHECK(decrypt(gp, kp.s, right) == expected);
  }
}

TEST_CASE("probabilistic encryption yields distinct ciphertexts") {
  GroupParams gp = GroupParams::standard("modp-2048");
  Rng rng = Rng::from_seed(3);
  EncKeyPair kp = keygen(gp, rng);
  std::set<std::string> seen;
  for (int i = 0; i < 8; ++i) {
    Ciphertext ct = encrypt(gp, kp.y, Int(42), rng);
    seen.insert(ct.c1.get_str() + "/" + ct.c2.get_str());
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("exponentiation counter accounting") {
  GroupParams gp = GroupParams::standard("test-23");
  Rng rng = Rng::from_seed(21);
  EncKeyPair kp = keygen(gp, rng);
  SigKeyPair sk = sig_keygen(gp, rng);
  std::vector<uint8_t> msg = bytes_of("count me");

  ExpCounter c;
  encrypt(gp, kp.y, Int(5), rng, &c);
  CHECK(c.value() == 2);
  encrypt_with(gp, kp.y, Int(5), Int(0), &c);
  CHECK(c.value() == 2);  // r = 0 costs nothing
  Ciphertext ct = encrypt(gp, kp.y, Int(5), rng);
  decrypt(gp, kp.s, ct, &c);
  CHECK(c.value() == 3);
  Signature sig = sign(gp, sk, msg, rng, &c);
  CHECK(c.value() == 4);
  verify(gp, sk.v, msg, sig, &c);
  CHECK(c.value() == 7);  // three per verification
  hom_mul(gp, ct, ct);
  CHECK(c.value() == 7);  // multiplications are free
}

TEST_CASE("signatures") {
  GroupParams gp = GroupParams::standard("modp-1536");
  Rng rng = Rng::from_seed(5);
  SigKeyPair key = sig_keygen(gp, rng);
  SigKeyPair other = sig_keygen(gp, rng);
  std::vector<uint8_t> msg = bytes_of("the permuted ciphertext list");

  Signature sig = sign(gp, key, msg, rng);
  CHECK(sig.r >= 1);
  CHECK(sig.r < gp.p);
  CHECK(sig.s >= 0);
  CHECK(sig.s < gp.p - 1);
  CHECK(verify(gp, key.v, msg, sig));

  std::vector<uint8_t> flipped = msg;
  flipped[4] ^= 0x01;
  CHECK_FALSE(verify(gp, key.v, flipped, sig));
  CHECK_FALSE(verify(gp, other.v, msg, sig));

  // malformed signatures are rejected without throwing
  CHECK_FALSE(verify(gp, key.v, msg, {Int(0), sig.s}));
  CHECK_FALSE(verify(gp, key.v, msg, {gp.p, sig.s}));
  CHECK_FALSE(verify(gp, key.v, msg, {sig.r, gp.p - 1}));
  CHECK_FALSE(verify(gp, key.v, msg, {sig.r, Int(-1)}));

  CHECK(code_of([&] { sign(gp, key, {}, rng); }) == Err::InvalidArgument);
}

TEST_CASE("ciphertext serialization is fixed-width c1||c2") {
  GroupParams gp = GroupParams::standard("test-23");
  std::vector<uint8_t> bytes = ciphertext_bytes(gp, {Int(2), Int(18)});
  CHECK(bytes == std::vector<uint8_t>{0x02, 0x12});

  GroupParams big = GroupParams::standard("modp-2048");
  CHECK(ciphertext_bytes(big, {Int(1), Int(2)}).size() == 512);
}
