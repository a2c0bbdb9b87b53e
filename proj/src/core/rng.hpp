#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "core/bigint.hpp"

namespace privdist {

/// Seedable randomness source behind every randomized operation (nonces,
/// keys, masks, permutations). Seeded construction gives bit-reproducible
/// runs for tests; from_entropy() pulls a fresh 256-bit seed from the OS.
/// Not hardened against side channels, like the rest of the arithmetic.
class Rng {
 public:
  static Rng from_entropy();
  static Rng from_seed(uint64_t seed);

  Rng(Rng&&) noexcept = default;
  Rng& operator=(Rng&&) noexcept = default;

  /// Uniform in [0, n), n >= 1.
  Int below(const Int& n);
  /// Uniform in [lo, hi], inclusive.
  Int range(const Int& lo, const Int& hi);
  /// Uniform with exactly `n` bits (top bit set).
  Int exact_bits(unsigned n);
  std::vector<uint8_t> bytes(size_t n);
  uint64_t below_u64(uint64_t n);

 private:
  explicit Rng(const Int& seed);
  std::unique_ptr<gmp_randclass> state_;
};

}  // namespace privdist
