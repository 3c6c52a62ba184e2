#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "rsot/point.hpp"

namespace rsot {

/// Ground costs supported by the solver.
///  - SqEuclidean:       c(x,y) = ||x-y||^2 / 2
///  - SqGeodesicSphere:  c(x,y) = d_g(x,y)^2 on the unit sphere,
///                       d_g(p,q) = arccos(p.q)
enum class CostKind { SqEuclidean, SqGeodesicSphere };

inline double geodesic_distance(const Point& p, const Point& q) {
  return std::acos(std::clamp(dot(p, q), -1.0, 1.0));
}

inline double cost(CostKind kind, const Point& x, const Point& y) {
  switch (kind) {
    case CostKind::SqEuclidean:
      return 0.5 * squared_distance(x, y);
    case CostKind::SqGeodesicSphere: {
      const double d = geodesic_distance(x, y);
      return d * d;
    }
  }
  return 0.0;  // unreachable
}

/// Euclidean ball radius equivalent to the cost cutoff: c(x,y) < C iff
/// ||x-y|| < radius. Defined only for the squared Euclidean cost; other
/// costs return nullopt and callers must fall back to a full scan.
inline std::optional<double> ball_radius(CostKind kind, double cutoff) {
  if (cutoff < 0.0) return 0.0;
  if (kind == CostKind::SqEuclidean) return std::sqrt(2.0 * cutoff);
  return std::nullopt;
}

inline CostKind cost_kind_from_string(const std::string& s) {
  if (s == "sqeuclidean") return CostKind::SqEuclidean;
  if (s == "sqgeodesic") return CostKind::SqGeodesicSphere;
  throw std::invalid_argument("unknown cost kind: " + s);
}

inline std::string to_string(CostKind kind) {
  return kind == CostKind::SqEuclidean ? "sqeuclidean" : "sqgeodesic";
}

}  // namespace rsot
