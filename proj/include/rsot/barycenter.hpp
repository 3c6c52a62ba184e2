#pragma once

#include <cstdint>
#include <vector>

#include "rsot/hierarchy.hpp"
#include "rsot/lbfgs.hpp"
#include "rsot/measures.hpp"
#include "rsot/solver_config.hpp"

namespace rsot {

struct BarycenterConfig {
  std::vector<double> lambdas;   // one weight per source, summing to 1
  std::size_t support_size = 1;  // N_b
  double damping = 0.5;          // theta in (0,1]
  double alpha = 0.1;            // weight-update step (general variant)
  double beta = 0.1;             // location-update step (general variant)
  double weight_tol = 1e-6;      // relative tolerance on the weight update
  double location_tol = 1e-6;   // relative tolerance on the location update
  double rms_tol = 1e-5;         // RMS point-movement stopping threshold
  int max_outer_iterations = 100;
  SolverConfig inner;            // inner RSOT solver settings

  void validate() const;
};

struct BarycenterTrace {
  std::vector<double> rms_movement;          // one entry per outer iteration
  std::vector<PointList> snapshots;          // support points per iteration
  std::vector<SolverReport> inner_reports;   // K reports per iteration
  int iterations = 0;
  bool converged = false;
};

/// One barycenter source: atoms plus an optional source-side hierarchy for
/// the first inner solve. Target-side multilevel stays disabled inside the
/// Lloyd loop because the support points move every iteration.
struct BarycenterSource {
  SourceAtoms atoms;
  const SourceHierarchy* hierarchy = nullptr;
};

/// Fixed-weight Wasserstein barycenter via the damped Lloyd iteration
///   y_j <- (1-theta) y_j + theta sum_i lambda_i T_{i,j}
/// with uniform weights 1/N_b and quadratic cost. Every inner solve warm
/// starts from the previous outer iteration's potential.
std::pair<PointList, BarycenterTrace> barycenter_lloyd(
    const std::vector<BarycenterSource>& sources, const BarycenterConfig& cfg,
    const PointList& initial_points);

/// State for the general (weights + locations) descent of the barycenter
/// objective.
struct BarycenterState {
  PointList points;
  std::vector<double> weights;
};

/// One positivity-preserving update step:
///   dnu   = sum_i lambda_i psi_i (gauge-fixed, mean zero under nu)
///   nu'   = normalize1(nu * exp(-alpha * nu * dnu))
///   dy_j  = sum_i lambda_i nu_j (y_j - T_{i,j})
///   Y'    = Y - beta * dY
/// `potentials` are the converged inner duals, `conditional_means` the
/// per-source conditional barycenters T_{i,j}.
BarycenterState barycenter_general_step(
    const BarycenterState& state,
    const std::vector<std::vector<double>>& potentials,
    const std::vector<PointList>& conditional_means,
    const BarycenterConfig& cfg);

}  // namespace rsot
