#pragma once

#include <cstdint>

#include "core/bigint.hpp"

namespace privdist {

/// Fixed-point codec between signed reals and Z*_p residues.
///
/// A value v in [-1, 1] becomes round(v*F) embedded as a centered residue:
/// non-negative integers map to themselves, negative ones to p - |z|. Because
/// (-u mod p)(-w mod p) = uw mod p, signs survive homomorphic multiplication
/// with no side vector. Every protocol term is a product of exactly five
/// encoded factors, so plaintext terms live at scale F^5; construction
/// requires 4*F^5 < p so no term or mask can wrap in centered decoding.
class FixedPointCodec {
 public:
  static constexpr int kFactorCount = 5;
  static constexpr uint64_t kDefaultScale = 1'000'000'000'000ULL;  // 10^12

  FixedPointCodec(uint64_t scale, Int p);

  uint64_t scale() const { return scale_; }
  const Int& term_scale() const { return term_scale_; }  // F^5
  const Int& modulus() const { return p_; }

  /// round(v*F) as a centered residue. |v| must be <= 1. A value that rounds
  /// to zero is rejected: 0 is not in Z*_p.
  Int encode_real(double v) const;

  /// encode_real with exact zeros nudged to the smallest representable
  /// magnitude 1 (an error of 1/F). Trigonometric inputs hit zero on the
  /// equator and prime meridian, which are legitimate coordinates.
  Int encode_trig(double v) const;

  /// Centered residue of an arbitrary signed integer (mask values).
  Int encode_signed(const Int& z) const;

  /// m for m <= (p-1)/2, else m - p.
  Int decode_signed(const Int& m) const;

  /// total / F^5 as a real number.
  double decode_term_sum(const Int& total) const;

 private:
  uint64_t scale_;
  Int term_scale_;
  Int p_;
  Int half_p_;
};

}  // namespace privdist
