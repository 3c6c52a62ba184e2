#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "rsot/cost.hpp"
#include "rsot/measures.hpp"
#include "rsot/point.hpp"

namespace rsot {

/// Immutable R-tree over a point set, answering exact Euclidean ball range
/// queries and nearest-neighbor queries. Safe for concurrent reads.
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointList& points);
  ~SpatialIndex();
  SpatialIndex(SpatialIndex&&) noexcept;
  SpatialIndex& operator=(SpatialIndex&&) noexcept;
  SpatialIndex(const SpatialIndex&) = delete;
  SpatialIndex& operator=(const SpatialIndex&) = delete;

  std::size_t size() const { return count_; }

  /// Indices of all points with ||p - center|| < radius (strict), ascending.
  std::vector<std::size_t> ball_query(const Point& center, double radius) const;

  /// Appends the ball query result to `out` (cleared first).
  void ball_query(const Point& center, double radius,
                  std::vector<std::size_t>& out) const;

  /// Index of the Euclidean-nearest point (lowest index on ties).
  std::size_t nearest(const Point& center) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t count_ = 0;
};

SpatialIndex build_index(const PointList& points);

/// Exactly {j : c(center, y_j) < cutoff} via the index. Throws
/// std::invalid_argument when the cost kind has no ball-radius conversion;
/// callers must then fall back to a full scan.
std::vector<std::size_t> range_query(const SpatialIndex& index,
                                     const Point& center, double cutoff,
                                     CostKind kind);

/// Covering cost C0 = max over atoms of min over targets of c(x_q, y_j),
/// evaluated on the quadrature atoms.
double covering_cost(const SourceAtoms& atoms, const TargetMeasure& target,
                     CostKind kind);

}  // namespace rsot
