#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rsot {

/// Point in up to three dimensions. Coordinates beyond the active dimension
/// are kept at zero, so Euclidean distances computed on all three components
/// are exact for d = 1, 2, 3 alike.
using Point = std::array<double, 3>;

inline Point make_point(double x, double y = 0.0, double z = 0.0) {
  return {x, y, z};
}

inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Point operator+(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point operator*(double s, const Point& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

using PointList = std::vector<Point>;

}  // namespace rsot
