#pragma once

#include <string>
#include <vector>

#include "rsot/hierarchy.hpp"
#include "rsot/lbfgs.hpp"
#include "rsot/measures.hpp"
#include "rsot/potential.hpp"

namespace rsot {

/// Weighted point cloud `x[,y[,z]],weight`; dimension inferred from the
/// column count. A non-numeric first row is treated as a header.
struct PointCloud {
  int dim = 0;
  PointList points;
  std::vector<double> weights;
};

PointCloud load_point_cloud(const std::string& path);
void write_point_cloud(const std::string& path, int dim,
                       const PointList& points,
                       const std::vector<double>& weights);

/// Point cloud with weights normalized to a probability measure.
TargetMeasure load_target_measure(const std::string& path);

/// Potential CSV `index,psi`.
void write_potential(const std::string& path, const DualPotential& psi);
DualPotential load_potential(const std::string& path);

/// Scalar column CSV (one value per row, optional header).
std::vector<double> load_scalar_column(const std::string& path);
void write_scalar_column(const std::string& path, const std::string& header,
                         const std::vector<double>& values);

/// Solver report JSON with the stable key set {converged,
/// iterations_per_level, evaluations, grad_l1, wall_ms, epsilon_stages,
/// cutoff_history}.
void write_report(const std::string& path, const SolverReport& report);

/// Hierarchy levels as numbered point-cloud CSVs plus a `levels.txt`
/// manifest listing them coarsest first.
void write_target_hierarchy(const std::string& dir,
                            const TargetHierarchy& hier);
TargetHierarchy load_target_hierarchy_levels(const std::string& manifest);
void write_source_hierarchy(const std::string& dir,
                            const SourceHierarchy& hier);
SourceHierarchy load_source_hierarchy_levels(const std::string& manifest);

}  // namespace rsot
