#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rsot/measures.hpp"
#include "rsot/potential.hpp"
#include "rsot/solver_config.hpp"
#include "rsot/spatial_index.hpp"

namespace rsot {

/// Functional value, gradient, and evaluation statistics for one call.
struct EvalResult {
  double J = 0.0;
  std::vector<double> gradient;
  double D = 0.0;  // integrated inverse of the truncated sum
  std::uint64_t atoms_visited = 0;
  std::uint64_t candidate_pairs = 0;
  std::uint64_t empty_candidate_atoms = 0;

  double grad_l1() const {
    double s = 0.0;
    for (double g : gradient) s += std::abs(g);
    return s;
  }
};

/// Mutable per-solve truncation bookkeeping. The cutoff and the cached
/// estimates are refreshed once per accepted optimizer iterate and held
/// fixed during line searches.
struct TruncationState {
  double cutoff = std::numeric_limits<double>::infinity();
  double cached_D = 0.0;
  double cached_absJ = 0.0;
  bool has_cache = false;
  double psi_max = 0.0;
  double psi_min = 0.0;
  double psi_range = 0.0;  // Gamma = max - min
  double nu_max = 0.0;
  double nu_min = 0.0;
  double covering = 0.0;  // C0

  void set_psi_stats(const std::vector<double>& psi);
  void set_weight_stats(const std::vector<double>& nu);
};

/// C_pw = M + eps * ln(nu_max / delta_thr).
double cutoff_pointwise(const TruncationState& trunc, double eps,
                        double delta_thr);

/// C_int = max(C0, M + eps * ln(eps * D / (tau * |J|))), with D and |J|
/// taken from the previous accepted evaluation. Throws when the cached
/// functional estimate is below 1e-30.
double cutoff_integrated(const TruncationState& trunc, double eps, double tau);

/// C_geom = max(C0, C0 + Gamma + eps * ln(eps / (nu_min * tau * |J|))).
double cutoff_geometric(const TruncationState& trunc, double eps, double tau);

/// First-iteration cutoff before any functional estimate exists: the
/// geometric bound evaluated with |J| = 1.
double cutoff_bootstrap(const TruncationState& trunc, double eps, double tau);

/// Refreshes psi stats and the cutoff for the configured truncation kind,
/// using cached D and |J| from the previous accepted evaluation.
void refresh_truncation(TruncationState& trunc, const std::vector<double>& psi,
                        const SolverConfig& cfg);

/// Truncated evaluation of the discretized dual functional and gradient:
///   J = sum_q eps * ln(S_trunc(x_q)) m_q - sum_j psi_j nu_j
///   g_k = sum_q p_k(x_q | psi) m_q - nu_k
/// where S_trunc sums candidates with c(x_q, y_j) < cutoff. Per-atom
/// log-sum-exp is stabilized by the maximum exponent. Atoms whose candidate
/// set comes back empty are augmented with their nearest target so that
/// S_trunc stays positive and the gradient components still sum to zero.
/// Parallel over atoms; partials merge in worker order, so results are
/// bitwise reproducible for a fixed worker count.
EvalResult evaluate_dual(const SourceAtoms& atoms, const TargetMeasure& target,
                         const DualPotential& psi, const SolverConfig& cfg,
                         const TruncationState& trunc,
                         const SpatialIndex& index);

}  // namespace rsot
