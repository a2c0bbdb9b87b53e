#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/bigint.hpp"
#include "core/rng.hpp"

namespace privdist {

/// Safe-prime multiplicative group hosting all ciphertexts: p = 2q + 1 with
/// p, q prime and g a generator of the order-q subgroup of Z*_p.
struct GroupParams {
  Int p;
  Int q;
  Int g;

  /// Built-in groups: "test-23" (p=23, q=11, g=2) and the published
  /// safe-prime groups "modp-1536", "modp-2048", "modp-3072" with g=2.
  static GroupParams standard(const std::string& name);

  /// Fresh random safe prime of exactly `bits` bits with an order-q
  /// generator. Minimum 8 bits; sizes below ~64 bits are for tests only.
  /// Generation retries internally until a safe prime is found, so large
  /// sizes (2048+) can take minutes.
  static GroupParams generate(unsigned bits, Rng& rng);

  /// Rebuild a group from its (p, g) parts, e.g. from a key file. When
  /// `check_primality` both p and q get a probabilistic primality test with
  /// error below 2^-128; the subgroup-order conditions are always checked.
  static GroupParams from_parts(Int p, Int g, bool check_primality = true);

  static const std::vector<std::string>& standard_names();

  unsigned bits() const;
  size_t element_width() const;  // ceil(bits(p)/8)
  bool is_element(const Int& x) const { return x >= 1 && x < p; }

  bool operator==(const GroupParams&) const = default;
};

struct EncKeyPair {
  Int s;  // secret exponent in [1, q-1]
  Int y;  // g^s mod p
};

struct Ciphertext {
  Int c1;
  Int c2;

  bool operator==(const Ciphertext&) const = default;
};

struct SigKeyPair {
  Int x;  // secret exponent in [1, p-2]
  Int v;  // g^x mod p
};

struct Signature {
  Int r;  // group element, 1 <= r < p
  Int s;  // integer mod p-1

  bool operator==(const Signature&) const = default;
};

EncKeyPair keygen(const GroupParams& gp, Rng& rng, ExpCounter* counter = nullptr);

/// ElGamal encryption (g^r, m*y^r) with fresh r in [1, q-1].
/// Two exponentiations.
Ciphertext encrypt(const GroupParams& gp, const Int& y, const Int& m, Rng& rng,
                   ExpCounter* counter = nullptr);

/// Encryption with caller-supplied randomness r in [0, q-1]. r = 0 yields the
/// deterministic constant form (1, m) and performs no exponentiation; it is
/// meant for public constants only and gives no confidentiality.
Ciphertext encrypt_with(const GroupParams& gp, const Int& y, const Int& m,
                        const Int& r, ExpCounter* counter = nullptr);

/// c2 * (c1^s)^-1 mod p. One exponentiation.
Int decrypt(const GroupParams& gp, const Int& s, const Ciphertext& ct,
            ExpCounter* counter = nullptr);

/// Componentwise product: decrypts to the product of the plaintexts mod p.
/// No exponentiations.
Ciphertext hom_mul(const GroupParams& gp, const Ciphertext& a, const Ciphertext& b);

SigKeyPair sig_keygen(const GroupParams& gp, Rng& rng, ExpCounter* counter = nullptr);

/// ElGamal signature over h = SHA-256(msg) reduced mod p-1. One
/// exponentiation (g^k); the modular inverse of k is not counted.
Signature sign(const GroupParams& gp, const SigKeyPair& key,
               std::span<const uint8_t> msg, Rng& rng,
               ExpCounter* counter = nullptr);

/// Checks g^h == v^r * r^s mod p. Three exponentiations on the happy path;
/// returns false (never throws) on any malformation.
bool verify(const GroupParams& gp, const Int& v, std::span<const uint8_t> msg,
            const Signature& sig, ExpCounter* counter = nullptr);

/// Fixed-width big-endian c1 bytes followed by c2 bytes.
std::vector<uint8_t> ciphertext_bytes(const GroupParams& gp, const Ciphertext& ct);

}  // namespace privdist
