#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "core/haversine.hpp"
#include "test_util.hpp"

using namespace privdist;
using privdist::testing::code_of;
using privdist::testing::random_point;
using privdist::testing::vector_angle_distance_km;

namespace {
constexpr double kPi = std::numbers::pi;
const EarthModel kEarth{};
// values frozen from the independent vector-angle oracle
constexpr double kPiR = 20015.086796020572;
constexpr double kBcnTgnKm = 83.1039994918148;       // 41.3851,2.1734 - 41.1189,1.2445 deg
constexpr double kRadiansPairKm = 78.17032584746835;  // the radian test pair below
}  // namespace

TEST_CASE("haversine_direct anchors") {
  GeoPoint same = make_point(0.7, -1.2);
  CHECK(haversine_direct(same, same, kEarth) == 0.0);

  CHECK(haversine_direct(make_point(0, 0), make_point(0, kPi), kEarth) ==
        doctest::Approx(kPiR).epsilon(1e-12));
  CHECK(haversine_direct(make_point(0, 0), make_point(0, kPi / 2), kEarth) ==
        doctest::Approx(kPiR / 2).epsilon(1e-12));
}

TEST_CASE("haversine_direct matches the independent vector-angle oracle") {
  GeoPoint bcn = point_from_degrees(41.3851, 2.1734);
  GeoPoint tgn = point_from_degrees(41.1189, 1.2445);
  CHECK(haversine_direct(bcn, tgn, kEarth) == doctest::Approx(kBcnTgnKm).epsilon(1e-12));

  GeoPoint r1 = make_point(0.72060, 0.03774);
  GeoPoint r2 = make_point(0.71800, 0.02180);
  CHECK(haversine_direct(r1, r2, kEarth) == doctest::Approx(kRadiansPairKm).epsilon(1e-12));

  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    GeoPoint a = random_point(rng), b = random_point(rng);
    double hav = haversine_direct(a, b, kEarth);
    double oracle = vector_angle_distance_km(a, b, kEarth.radius_km);
    CHECK(hav == doctest::Approx(oracle).epsilon(0).scale(0).epsilon(1e-9));
    CHECK(hav >= 0);
    CHECK(hav <= kPiR + 1e-6);
  }
}

TEST_CASE("term breakdown identities") {
  GeoPoint p = make_point(0.4, 1.1);
  TermBreakdown same = term_breakdown(p, p);
  CHECK(same.a1 + same.a2 + same.a3 == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(same.a == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

  TermBreakdown anti = term_breakdown(make_point(0, 0), make_point(0, kPi));
  CHECK(anti.a1 == 0.0);
  CHECK(anti.a2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(anti.a3 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(anti.a == doctest::Approx(1.0).epsilon(1e-15));

  // the a of the breakdown equals the a of the step form
  GeoPoint bcn = make_point(0.72060, 0.03774);
  GeoPoint tgn = make_point(0.71800, 0.02180);
  CHECK(term_breakdown(bcn, tgn).a ==
        doctest::Approx(haversine_a(bcn, tgn)).epsilon(0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("all four splits agree") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    GeoPoint a = random_point(rng), b = random_point(rng);
    TermBreakdown tb = term_breakdown(a, b);
    double reference = haversine_a(a, b);
    for (SplitForm split : {SplitForm::SixTerm, SplitForm::Tilde13, SplitForm::Tilde46,
                            SplitForm::Reduced}) {
      CHECK(std::fabs(a_from_split(tb, split) - reference) <= 1e-12);
      CHECK(std::fabs(a_from_split(tb, split) - tb.a) <= 1e-12);
    }
  }

  GeoPoint p = make_point(-0.3, 2.0);
  TermBreakdown same = term_breakdown(p, p);
  for (SplitForm split : {SplitForm::SixTerm, SplitForm::Tilde13, SplitForm::Tilde46,
                          SplitForm::Reduced})
    CHECK(std::fabs(a_from_split(same, split)) <= 1e-12);

  TermBreakdown anti = term_breakdown(make_point(0, 0), make_point(0, kPi));
  CHECK(a_from_split(anti, SplitForm::Reduced) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("split labels") {
  CHECK(split_from_label("six-term") == SplitForm::SixTerm);
  CHECK(split_from_label("tilde-13") == SplitForm::Tilde13);
  CHECK(split_from_label("tilde-46") == SplitForm::Tilde46);
  CHECK(split_from_label("reduced") == SplitForm::Reduced);
  CHECK(code_of([] { split_from_label("both-tilde"); }) == Err::InvalidArgument);
}

TEST_CASE("same-quadrant points give negative terms") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(0.01, kPi / 2 - 0.01);
  for (int i = 0; i < 500; ++i) {
    TermBreakdown tb = term_breakdown(make_point(angle(rng), angle(rng)),
                                      make_point(angle(rng), angle(rng)));
    CHECK(tb.a1 < 0);
    CHECK(tb.a2 < 0);
    CHECK(tb.a3 < 0);
  }
}

TEST_CASE("distance symmetry") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    GeoPoint a = random_point(rng), b = random_point(rng);
    CHECK(std::fabs(haversine_direct(a, b, kEarth) - haversine_direct(b, a, kEarth)) <=
          1e-12);
  }
}

TEST_CASE("distance_from_a window") {
  CHECK(distance_from_a(0.0, kEarth) == 0.0);
  CHECK(distance_from_a(1.0, kEarth) == doctest::Approx(kPiR).epsilon(1e-12));
  CHECK(distance_from_a(0.5, kEarth) == doctest::Approx(kPiR / 2).epsilon(1e-12));
  // inside the tolerance window: clamped
  CHECK(distance_from_a(-1e-10, kEarth) == 0.0);
  CHECK(distance_from_a(1 + 1e-10, kEarth) == doctest::Approx(kPiR).epsilon(1e-12));
  // outside: corrupted run
  CHECK(code_of([] { distance_from_a(-1e-6, kEarth); }) == Err::CorruptedRun);
  CHECK(code_of([] { distance_from_a(1 + 1e-6, kEarth); }) == Err::CorruptedRun);
  CHECK(code_of([] { distance_from_a(std::nan(""), kEarth); }) == Err::CorruptedRun);
}

TEST_CASE("coordinate validation") {
  CHECK(code_of([] { make_point(2.0, 0); }) == Err::InvalidArgument);
  CHECK(code_of([] { make_point(0, 4.0); }) == Err::InvalidArgument);
  CHECK(make_point(0, -kPi).lon == kPi);  // -pi normalizes to +pi
  CHECK(point_from_degrees(0, 180).lon == doctest::Approx(kPi));
  CHECK(code_of([] { point_from_degrees(91, 0); }) == Err::InvalidArgument);
  CHECK(code_of([] { point_from_degrees(0, 181); }) == Err::InvalidArgument);
  CHECK(point_from_degrees(0, -180).lon == doctest::Approx(kPi));
}
