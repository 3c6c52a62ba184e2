#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rsot/measures.hpp"

namespace rsot {

/// Coarse-to-fine sequence of target measures. levels[0] is the coarsest,
/// levels.back() the original measure. parent[l][i] is the cluster at
/// level l that point i of level l+1 belongs to.
struct TargetHierarchy {
  std::vector<TargetMeasure> levels;
  std::vector<std::vector<std::size_t>> parent;

  std::size_t level_count() const { return levels.size(); }
};

/// Coarse-to-fine sequence of atomized source measures, each with
/// mass 1. levels[0] is the coarsest, levels.back() the fine atoms.
struct SourceHierarchy {
  std::vector<SourceAtoms> levels;

  std::size_t level_count() const { return levels.size(); }
};

/// Clusters the target support points level by level (finest to coarsest)
/// with seeded k-means. Coarse points are plain cluster centroids; coarse
/// weights aggregate member weights exactly. level_sizes lists the point
/// counts coarsest first; the last entry must equal the target size.
TargetHierarchy build_target_hierarchy(const TargetMeasure& target,
                                       const std::vector<std::size_t>& level_sizes,
                                       std::uint64_t seed);

/// Density lookup used when transferring fine-scale density values to
/// coarse atoms.
using DensityOracle = std::function<double(const Point&)>;

/// Oracle returning the density of the Euclidean-nearest fine atom.
DensityOracle nearest_atom_density_oracle(const SourceAtoms& fine);

/// Clusters atom locations level by level. Coarse locations are
/// mass-weighted cluster centroids, coarse quadrature weights aggregate the
/// members, coarse densities come from the oracle, and each level's masses
/// are renormalized to one.
SourceHierarchy build_source_hierarchy(const SourceAtoms& fine_atoms,
                                       const DensityOracle& fine_density,
                                       const std::vector<std::size_t>& level_sizes,
                                       std::uint64_t seed);

}  // namespace rsot
