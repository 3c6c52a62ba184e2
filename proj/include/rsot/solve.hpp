#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rsot/hierarchy.hpp"
#include "rsot/lbfgs.hpp"
#include "rsot/measures.hpp"
#include "rsot/potential.hpp"
#include "rsot/solver_config.hpp"

namespace rsot {

/// Stages [eps_target * 10^steps, ..., eps_target * 10, eps_target].
std::vector<double> epsilon_schedule(double eps_target, int steps);

/// Solves one RSOT problem at cfg.epsilon from the given start; psi is
/// updated in place and the stage report returned.
StageReport solve_single(const SourceAtoms& atoms, const TargetMeasure& target,
                         const SolverConfig& cfg, std::vector<double>& psi);

/// Full solve with epsilon scaling: one L-BFGS stage per schedule entry,
/// each warm-started from the previous stage. psi0 defaults to zeros.
std::pair<DualPotential, SolverReport> solve(
    const SourceAtoms& atoms, const TargetMeasure& target,
    const SolverConfig& cfg,
    std::optional<DualPotential> psi0 = std::nullopt);

/// One Sinkhorn-like half step transferring a coarse potential to fine
/// target points:
///   psi_k = -eps * ln sum_q [ exp(-c(x_q,y_k)/eps) / S_coarse(x_q) ] m_q
/// with S_coarse the coarse-level normalizer, stabilized in the log domain.
/// Truncation applies to the inner (coarse) sum via `cutoff`.
std::vector<double> softmax_refine(const TargetMeasure& coarse,
                                   const std::vector<double>& coarse_psi,
                                   const PointList& fine_points,
                                   const SourceAtoms& atoms, double eps,
                                   CostKind kind,
                                   double cutoff =
                                       std::numeric_limits<double>::infinity(),
                                   int workers = 1);

enum class MultilevelStrategy { SourceOnly, TargetOnly, Combined };

/// Level walk of the combined strategy. Step l selects source level
/// i_s(l) = max(0, l - (L_max - L_mu)) and target level
/// i_t(l) = max(0, l - (L_max - L_nu)); epsilon decreases log-linearly
/// from eps_target * 10^scaling_steps at the coarsest step to eps_target.
struct MultilevelSchedule {
  int L_mu = 0;
  int L_nu = 0;
  int L_max = 0;
  struct Step {
    int i_s = 0;
    int i_t = 0;
    double epsilon = 0.0;
  };
  std::vector<Step> steps;
};

MultilevelSchedule make_multilevel_schedule(int L_mu, int L_nu,
                                            double eps_target,
                                            int scaling_steps);

/// Coarse-to-fine solve across the hierarchies. When the target level
/// index increases the potential is transferred by softmax refinement,
/// otherwise by injection. The side not covered by the strategy stays at
/// its finest level throughout.
std::pair<DualPotential, SolverReport> solve_multilevel(
    const SourceHierarchy& source_hier, const TargetHierarchy& target_hier,
    const SolverConfig& cfg, MultilevelStrategy strategy);

}  // namespace rsot
