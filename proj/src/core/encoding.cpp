#include "core/encoding.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace privdist {

FixedPointCodec::FixedPointCodec(uint64_t scale, Int p)
    : scale_(scale), p_(std::move(p)) {
  if (scale_ < 2 || scale_ % 2 != 0)
    fail(Err::Codec, "scale factor must be a positive even integer");
  if (scale_ > 1'000'000'000'000'000'000ULL)
    fail(Err::Codec, "scale factor above 10^18 is not supported");
  Int f(static_cast<unsigned long>(scale_));
  term_scale_ = f * f * f * f * f;
  if (4 * term_scale_ >= p_)
    fail(Err::Codec, "group modulus too small: need 4*F^5 < p");
  half_p_ = (p_ - 1) / 2;
}

Int FixedPointCodec::encode_real(double v) const {
  if (!(std::fabs(v) <= 1.0)) fail(Err::Range, "value outside [-1, 1]");
  long long scaled = llroundl(static_cast<long double>(v) * scale_);
  if (scaled == 0)
    fail(Err::Codec, "value rounds to zero, which is not in Z*_p");
  return encode_signed(Int(static_cast<long>(scaled)));
}

Int FixedPointCodec::encode_trig(double v) const {
  if (!(std::fabs(v) <= 1.0)) fail(Err::Range, "value outside [-1, 1]");
  long long scaled = llroundl(static_cast<long double>(v) * scale_);
  if (scaled == 0) scaled = std::signbit(v) ? -1 : 1;
  return encode_signed(Int(static_cast<long>(scaled)));
}

Int FixedPointCodec::encode_signed(const Int& z) const {
  Int r = z % p_;
  if (r < 0) r += p_;
  if (r == 0) fail(Err::Codec, "zero is not in Z*_p");
  return r;
}

Int FixedPointCodec::decode_signed(const Int& m) const {
  if (m < 1 || m >= p_) fail(Err::Range, "residue outside [1, p-1]");
  return m <= half_p_ ? m : Int(m - p_);
}

double FixedPointCodec::decode_term_sum(const Int& total) const {
  return mpz_get_d(total.get_mpz_t()) / mpz_get_d(term_scale_.get_mpz_t());
}

}  // namespace privdist
