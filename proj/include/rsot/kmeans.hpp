#pragma once

#include <cstdint>
#include <vector>

#include "rsot/point.hpp"

namespace rsot {

struct KMeansResult {
  PointList centroids;
  std::vector<std::size_t> assignment;  // point index -> cluster index
};

/// Deterministic Lloyd k-means with k-means++ seeding. Assignments use
/// unweighted coordinates; ties go to the lowest cluster index. Runs at
/// most 100 sweeps or until the largest centroid shift falls below 1e-6
/// relative to the bounding-box diagonal. Empty clusters are repaired by
/// splitting the largest cluster at its farthest member.
KMeansResult kmeans(const PointList& points, std::size_t k,
                    std::uint64_t seed);

}  // namespace rsot
