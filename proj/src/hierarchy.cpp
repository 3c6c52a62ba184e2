#include "rsot/hierarchy.hpp"

#include <memory>
#include <stdexcept>

#include "rsot/kmeans.hpp"
#include "rsot/spatial_index.hpp"

namespace rsot {

namespace {

void check_level_sizes(const std::vector<std::size_t>& sizes,
                       std::size_t finest) {
  if (sizes.empty()) throw std::invalid_argument("hierarchy: no level sizes");
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    if (sizes[l] >= sizes[l + 1])
      throw std::invalid_argument(
          "hierarchy: level sizes must be strictly increasing");
  if (sizes.back() != finest)
    throw std::invalid_argument(
        "hierarchy: last level size must equal the input size");
  for (std::size_t s : sizes)
    if (s > finest)
      throw std::invalid_argument("hierarchy: requested size exceeds input");
}

}  // namespace

TargetHierarchy build_target_hierarchy(const TargetMeasure& target,
                                       const std::vector<std::size_t>& level_sizes,
                                       std::uint64_t seed) {
  require_valid(target);
  check_level_sizes(level_sizes, target.size());

  const std::size_t nlevels = level_sizes.size();
  TargetHierarchy hier;
  hier.levels.resize(nlevels);
  hier.parent.resize(nlevels > 0 ? nlevels - 1 : 0);
  hier.levels[nlevels - 1] = target;

  for (std::size_t l = nlevels - 1; l-- > 0;) {
    const TargetMeasure& fine = hier.levels[l + 1];
    const std::size_t k = level_sizes[l];
    const KMeansResult km =
        kmeans(fine.points, k, seed + static_cast<std::uint64_t>(l));

    TargetMeasure coarse;
    coarse.dim = fine.dim;
    coarse.points.assign(k, Point{0.0, 0.0, 0.0});
    coarse.weights.assign(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const std::size_t c = km.assignment[i];
      coarse.points[c] = coarse.points[c] + fine.points[i];
      coarse.weights[c] += fine.weights[i];
      ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c)
      coarse.points[c] = (1.0 / static_cast<double>(counts[c])) * coarse.points[c];

    hier.parent[l] = km.assignment;
    hier.levels[l] = std::move(coarse);
  }
  return hier;
}

DensityOracle nearest_atom_density_oracle(const SourceAtoms& fine) {
  auto index = std::make_shared<SpatialIndex>(fine.points);
  auto densities = std::make_shared<std::vector<double>>(fine.densities);
  return [index, densities](const Point& p) {
    return (*densities)[index->nearest(p)];
  };
}

SourceHierarchy build_source_hierarchy(const SourceAtoms& fine_atoms,
                                       const DensityOracle& fine_density,
                                       const std::vector<std::size_t>& level_sizes,
                                       std::uint64_t seed) {
  if (fine_atoms.size() == 0)
    throw std::invalid_argument("source hierarchy: empty atoms");
  check_level_sizes(level_sizes, fine_atoms.size());

  const std::size_t nlevels = level_sizes.size();
  SourceHierarchy hier;
  hier.levels.resize(nlevels);
  hier.levels[nlevels - 1] = fine_atoms;

  for (std::size_t l = nlevels - 1; l-- > 0;) {
    const SourceAtoms& fine = hier.levels[l + 1];
    const std::size_t k = level_sizes[l];
    const KMeansResult km =
        kmeans(fine.points, k, seed + static_cast<std::uint64_t>(l));

    SourceAtoms coarse;
    coarse.dim = fine.dim;
    coarse.points.assign(k, Point{0.0, 0.0, 0.0});
    coarse.quad_weights.assign(k, 0.0);
    coarse.densities.assign(k, 0.0);
    coarse.masses.assign(k, 0.0);
    std::vector<double> cluster_mass(k, 0.0);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const std::size_t c = km.assignment[i];
      coarse.points[c] = coarse.points[c] + fine.masses[i] * fine.points[i];
      coarse.quad_weights[c] += fine.quad_weights[i];
      cluster_mass[c] += fine.masses[i];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (!(cluster_mass[c] > 0.0))
        throw std::runtime_error("source hierarchy: empty cluster mass");
      coarse.points[c] = (1.0 / cluster_mass[c]) * coarse.points[c];
      coarse.densities[c] = fine_density(coarse.points[c]);
      coarse.masses[c] = coarse.densities[c] * coarse.quad_weights[c];
    }
    normalize_masses(coarse.masses);
    hier.levels[l] = std::move(coarse);
  }
  return hier;
}

}  // namespace rsot
