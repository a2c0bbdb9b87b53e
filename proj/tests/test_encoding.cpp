#include <doctest.h>

#include <cmath>
#include <random>

#include "core/encoding.hpp"
#include "core/group.hpp"
#include "test_util.hpp"

using namespace privdist;
using privdist::testing::code_of;

namespace {
const uint64_t kF = FixedPointCodec::kDefaultScale;  // 10^12
}

TEST_CASE("codec construction validates scale against the group") {
  GroupParams big = GroupParams::standard("modp-2048");
  CHECK_NOTHROW(FixedPointCodec(kF, big.p));
  CHECK(code_of([&] { FixedPointCodec(kF, Int(23)); }) == Err::Codec);
  CHECK(code_of([&] { FixedPointCodec(3, big.p); }) == Err::Codec);  // odd
  CHECK(code_of([&] { FixedPointCodec(0, big.p); }) == Err::Codec);

  // exact boundary: F = 1000 needs p > 4*10^15
  Int f5 = Int(1000) * 1000 * 1000 * 1000 * 1000;
  CHECK(code_of([&] { FixedPointCodec(1000, Int(4 * f5)); }) == Err::Codec);
  CHECK_NOTHROW(FixedPointCodec(1000, Int(4 * f5 + 1)));
}

TEST_CASE("encode_real fixed values") {
  GroupParams gp = GroupParams::standard("modp-2048");
  FixedPointCodec codec(kF, gp.p);

  CHECK(codec.encode_real(1.0) == Int(static_cast<unsigned long>(kF)));
  CHECK(codec.encode_real(-0.5) == gp.p - Int(static_cast<unsigned long>(kF / 2)));
  CHECK(codec.encode_real(std::sin(3.14159265358979323846 / 6)) ==
        Int(static_cast<unsigned long>(kF / 2)));
  CHECK(codec.encode_real(-1.0) == gp.p - Int(static_cast<unsigned long>(kF)));

  CHECK(code_of([&] { codec.encode_real(0.0); }) == Err::Codec);
  CHECK(code_of([&] { codec.encode_real(1e-15); }) == Err::Codec);
  CHECK(code_of([&] { codec.encode_real(1.5); }) == Err::Range);
  CHECK(code_of([&] { codec.encode_real(-1.5); }) == Err::Range);
}

TEST_CASE("encode_trig nudges exact zeros to magnitude one") {
  GroupParams gp = GroupParams::standard("modp-2048");
  FixedPointCodec codec(kF, gp.p);
  CHECK(codec.encode_trig(0.0) == 1);
  CHECK(codec.encode_trig(1e-15) == 1);
  CHECK(codec.encode_trig(-1e-15) == gp.p - 1);
  CHECK(codec.encode_trig(0.25) == codec.encode_real(0.25));
}

TEST_CASE("decode_signed is the centered inverse") {
  GroupParams gp = GroupParams::standard("modp-2048");
  FixedPointCodec codec(kF, gp.p);

  CHECK(codec.decode_signed(Int(7)) == 7);
  CHECK(codec.decode_signed(gp.p - 7) == -7);
  CHECK(codec.decode_signed((gp.p - 1) / 2) == (gp.p - 1) / 2);
  CHECK(code_of([&] { codec.decode_signed(Int(0)); }) == Err::Range);
  CHECK(code_of([&] { codec.decode_signed(gp.p); }) == Err::Range);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double v = dist(rng);
    double back = mpz_get_d(codec.decode_signed(codec.encode_trig(v)).get_mpz_t()) /
                  static_cast<double>(kF);
    CHECK(std::fabs(back - v) <= 0.5 / kF + 1.0 / kF);
  }
}

TEST_CASE("decode_term_sum divides by F^5") {
  GroupParams gp = GroupParams::standard("modp-2048");
  FixedPointCodec codec(kF, gp.p);
  const Int& f5 = codec.term_scale();

  CHECK(codec.decode_term_sum(-f5 / 2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(codec.decode_term_sum(Int(0)) == 0.0);
  CHECK(codec.decode_term_sum(f5 / 4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(codec.decode_term_sum(f5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("signs propagate through modular multiplication") {
  GroupParams gp = GroupParams::standard("modp-2048");
  FixedPointCodec codec(kF, gp.p);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-1000000000L, 1000000000L);
  int checked = 0;
  while (checked < 1000) {
    long u = dist(rng), w = dist(rng);
    if (u == 0 || w == 0) continue;
    Int eu = codec.encode_signed(Int(u));
    Int ew = codec.encode_signed(Int(w));
    CHECK(codec.decode_signed(eu * ew % gp.p) == Int(u) * Int(w));
    ++checked;
  }
}

TEST_CASE("scale composition error bound for k-factor products") {
  GroupParams gp = GroupParams::standard("modp-2048");
  FixedPointCodec codec(kF, gp.p);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + int(rng() % 4);  // 2..5 factors
    Int encoded_prod = 1;
    double true_prod = 1.0;
    for (int i = 0; i < k; ++i) {
      double v = dist(rng);
      encoded_prod = encoded_prod * codec.encode_trig(v) % gp.p;
      true_prod *= v;
    }
    // |decoded - v1..vk * F^k| <= k * F^(k-1) * (1/2 + 1/F)
    double fk = std::pow(static_cast<double>(kF), k);
    double decoded = mpz_get_d(codec.decode_signed(encoded_prod).get_mpz_t());
    double bound = k * std::pow(static_cast<double>(kF), k - 1) * (0.5 + 1.0 / kF);
    CHECK(std::fabs(decoded - true_prod * fk) <= bound * (1 + 1e-9));
  }
}
