#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "core/errors.hpp"
#include "core/haversine.hpp"

namespace privdist::testing {

/// Runs fn and returns the error code it threw, if any.
inline std::optional<Err> code_of(const std::function<void()>& fn) {
  try {
    fn();
    return std::nullopt;
  } catch (const Error& e) {
    return e.code();
  }
}

/// Independent great-circle oracle: angle between the 3D unit vectors of the
/// two points via atan2(|u x v|, u.v). Shares no code or formulation with the
/// haversine implementation and is well-conditioned at all distances.
inline double vector_angle_distance_km(GeoPoint a, GeoPoint b, double radius_km) {
  double ux = std::cos(a.lat) * std::cos(a.lon);
  double uy = std::cos(a.lat) * std::sin(a.lon);
  double uz = std::sin(a.lat);
  double vx = std::cos(b.lat) * std::cos(b.lon);
  double vy = std::cos(b.lat) * std::sin(b.lon);
  double vz = std::sin(b.lat);
  double dot = ux * vx + uy * vy + uz * vz;
  double cx = uy * vz - uz * vy;
  double cy = uz * vx - ux * vz;
  double cz = ux * vy - uy * vx;
  double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  return radius_km * std::atan2(cross, dot);
}

inline GeoPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lat(-1.5707, 1.5707);
  std::uniform_real_distribution<double> lon(-3.1415, 3.14159);
  return {lat(rng), lon(rng)};
}

}  // namespace privdist::testing
