#include "core/haversine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/errors.hpp"

namespace privdist {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kATolerance = 1e-9;
}  // namespace

GeoPoint make_point(double lat_rad, double lon_rad) {
  if (!std::isfinite(lat_rad) || !std::isfinite(lon_rad))
    fail(Err::InvalidArgument, "coordinates must be finite");
  if (lat_rad < -kPi / 2 || lat_rad > kPi / 2)
    fail(Err::InvalidArgument, "latitude outside [-pi/2, pi/2]");
  if (lon_rad <= -kPi || lon_rad > kPi) {
    // -pi marks the same meridian as +pi
    if (lon_rad == -kPi) lon_rad = kPi;
    else fail(Err::InvalidArgument, "longitude outside (-pi, pi]");
  }
  return {lat_rad, lon_rad};
}

GeoPoint point_from_degrees(double lat_deg, double lon_deg) {
  return make_point(lat_deg * kPi / 180.0, lon_deg * kPi / 180.0);
}

double haversine_a(GeoPoint p1, GeoPoint p2) {
  double sin_dlat = std::sin((p2.lat - p1.lat) / 2);
  double sin_dlon = std::sin((p2.lon - p1.lon) / 2);
  return sin_dlat * sin_dlat +
         std::cos(p1.lat) * std::cos(p2.lat) * sin_dlon * sin_dlon;
}

double haversine_direct(GeoPoint p1, GeoPoint p2, EarthModel earth) {
  return distance_from_a(haversine_a(p1, p2), earth);
}

TermBreakdown term_breakdown(GeoPoint p1, GeoPoint p2) {
  TermBreakdown b{};
  double cos_half_lat1 = std::cos(p1.lat / 2), sin_half_lat1 = std::sin(p1.lat / 2);
  double cos_half_lat2 = std::cos(p2.lat / 2), sin_half_lat2 = std::sin(p2.lat / 2);
  double cos_half_lon1 = std::cos(p1.lon / 2), sin_half_lon1 = std::sin(p1.lon / 2);
  double cos_half_lon2 = std::cos(p2.lon / 2), sin_half_lon2 = std::sin(p2.lon / 2);

  b.m = std::cos(p1.lat) * std::cos(p2.lat);
  b.t1 = cos_half_lat1 * cos_half_lat1 * sin_half_lat2 * sin_half_lat2;
  b.t2 = -0.5 * std::sin(p1.lat) * std::sin(p2.lat);
  b.t3 = sin_half_lat1 * sin_half_lat1 * cos_half_lat2 * cos_half_lat2;
  b.t4 = b.m * cos_half_lon1 * cos_half_lon1 * sin_half_lon2 * sin_half_lon2;
  b.t5 = -0.5 * b.m * std::sin(p1.lon) * std::sin(p2.lon);
  b.t6 = b.m * sin_half_lon1 * sin_half_lon1 * cos_half_lon2 * cos_half_lon2;

  b.t1_alt = 0.5;
  b.t3_alt = -0.5 * b.m;
  b.t4_alt = 0.5 * b.m;
  b.t6_alt = -0.5 * b.m * std::cos(p1.lon) * std::cos(p2.lon);

  b.a1 = b.t2;
  b.a2 = b.t5;
  b.a3 = b.t6_alt;
  b.a = 0.5 + b.a1 + b.a2 + b.a3;
  return b;
}

double a_from_split(const TermBreakdown& b, SplitForm split) {
  switch (split) {
    case SplitForm::SixTerm:
      return b.t1 + b.t2 + b.t3 + b.t4 + b.t5 + b.t6;
    case SplitForm::Tilde13:
      return b.t1_alt + b.t2 + b.t3_alt + b.t4 + b.t5 + b.t6;
    case SplitForm::Tilde46:
      return b.t1 + b.t2 + b.t3 + b.t4_alt + b.t5 + b.t6_alt;
    case SplitForm::Reduced:
      return b.t1_alt + b.t2 + b.t5 + b.t6_alt;
  }
  fail(Err::InvalidArgument, "unknown split form");
}

SplitForm split_from_label(std::string_view label) {
  if (label == "six-term") return SplitForm::SixTerm;
  if (label == "tilde-13") return SplitForm::Tilde13;
  if (label == "tilde-46") return SplitForm::Tilde46;
  if (label == "reduced") return SplitForm::Reduced;
  fail(Err::InvalidArgument, "unknown split label: " + std::string(label));
}

double distance_from_a(double a, EarthModel earth) {
  if (earth.radius_km <= 0) fail(Err::InvalidArgument, "earth radius must be positive");
  if (!std::isfinite(a) || a < -kATolerance || a > 1 + kATolerance)
    fail(Err::CorruptedRun, "haversine parameter outside [0, 1] tolerance window");
  a = std::clamp(a, 0.0, 1.0);
  return 2 * earth.radius_km * std::atan2(std::sqrt(a), std::sqrt(1 - a));
}

}  // namespace privdist
