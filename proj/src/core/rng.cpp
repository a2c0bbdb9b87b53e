#include "core/rng.hpp"

#include <random>

#include "core/errors.hpp"

namespace privdist {

Rng::Rng(const Int& seed) : state_(std::make_unique<gmp_randclass>(gmp_randinit_mt)) {
  state_->seed(seed);
}

Rng Rng::from_entropy() {
  std::random_device dev;
  Int seed = 0;
  for (int i = 0; i < 8; ++i) seed = (seed << 32) | Int(dev());
  return Rng(seed);
}

Rng Rng::from_seed(uint64_t seed) {
  return Rng(Int(static_cast<unsigned long>(seed >> 32)) << 32 |
             Int(static_cast<unsigned long>(seed & 0xffffffffULL)));
}

Int Rng::below(const Int& n) {
  if (n < 1) fail(Err::InvalidArgument, "rng bound must be positive");
  return state_->get_z_range(n);
}

Int Rng::range(const Int& lo, const Int& hi) {
  if (hi < lo) fail(Err::InvalidArgument, "empty rng range");
  return lo + below(hi - lo + 1);
}

Int Rng::exact_bits(unsigned n) {
  if (n == 0) fail(Err::InvalidArgument, "zero-bit random value");
  Int v = state_->get_z_bits(n);
  mpz_setbit(v.get_mpz_t(), n - 1);
  return v;
}

std::vector<uint8_t> Rng::bytes(size_t n) {
  std::vector<uint8_t> out(n);
  for (auto& b : out) b = static_cast<uint8_t>(below_u64(256));
  return out;
}

uint64_t Rng::below_u64(uint64_t n) {
  return mpz_get_ui(below(Int(static_cast<unsigned long>(n))).get_mpz_t());
}

}  // namespace privdist
