#pragma once

#include <string_view>

namespace privdist {

/// Latitude/longitude in radians, lat in [-pi/2, pi/2], lon in (-pi, pi].
struct GeoPoint {
  double lat;
  double lon;
};

GeoPoint make_point(double lat_rad, double lon_rad);
GeoPoint point_from_degrees(double lat_deg, double lon_deg);

struct EarthModel {
  double radius_km = 6371.0;
};

/// The haversine parameter a split into the product-form terms. a1, a2, a3
/// are the three addends the protocol computes homomorphically:
/// a = 1/2 + a1 + a2 + a3.
struct TermBreakdown {
  double m;  // cos(lat1) * cos(lat2)
  double t1, t2, t3, t4, t5, t6;
  double t1_alt, t3_alt, t4_alt, t6_alt;
  double a1, a2, a3;
  double a;
};

enum class SplitForm {
  SixTerm,   // t1 + t2 + t3 + t4 + t5 + t6
  Tilde13,   // t1_alt + t2 + t3_alt + t4 + t5 + t6
  Tilde46,   // t1 + t2 + t3 + t4_alt + t5 + t6_alt
  Reduced,   // t1_alt + t2 + t5 + t6_alt
};

SplitForm split_from_label(std::string_view label);

double haversine_a(GeoPoint p1, GeoPoint p2);
double haversine_direct(GeoPoint p1, GeoPoint p2, EarthModel earth);
TermBreakdown term_breakdown(GeoPoint p1, GeoPoint p2);
double a_from_split(const TermBreakdown& b, SplitForm split);

/// d = 2R*atan2(sqrt(a), sqrt(1-a)) after clamping a into [0, 1]. Values
/// outside [-1e-9, 1+1e-9] signal a corrupted protocol run and throw.
double distance_from_a(double a, EarthModel earth);

}  // namespace privdist
