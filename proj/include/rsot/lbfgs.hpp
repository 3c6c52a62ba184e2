#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rsot/evaluate.hpp"
#include "rsot/potential.hpp"
#include "rsot/solver_config.hpp"

namespace rsot {

enum class SolveStatus { Converged, MaxIterations, LineSearchFailed };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max iterations";
    case SolveStatus::LineSearchFailed: return "line search failed";
  }
  return "unknown";
}

/// Record of one optimization stage (one epsilon value / one level step).
struct StageReport {
  double epsilon = 0.0;
  int source_level = 0;
  int target_level = 0;
  int iterations = 0;
  int evaluations = 0;
  double final_grad_l1 = 0.0;
  double final_J = 0.0;
  double wall_ms = 0.0;
  SolveStatus status = SolveStatus::Converged;
  std::vector<double> cutoff_history;  // cutoff at each accepted iterate
};

struct SolverReport {
  std::vector<StageReport> stages;
  bool converged = false;

  int total_iterations() const {
    int n = 0;
    for (const auto& s : stages) n += s.iterations;
    return n;
  }
  int total_evaluations() const {
    int n = 0;
    for (const auto& s : stages) n += s.evaluations;
    return n;
  }
  double total_wall_ms() const {
    double t = 0.0;
    for (const auto& s : stages) t += s.wall_ms;
    return t;
  }
};

/// Objective callback: evaluates (J, gradient, D) at psi with the cutoff
/// currently held in the truncation state.
using Objective =
    std::function<EvalResult(const std::vector<double>& psi,
                             const TruncationState& trunc)>;

/// Minimizes the dual functional with limited-memory BFGS (two-loop
/// recursion) and a strong-Wolfe line search. Stops when the L1 gradient
/// norm drops to cfg.delta_tol. The truncation state is refreshed once per
/// accepted iterate and held fixed within each line search.
StageReport lbfgs_minimize(const Objective& objective,
                           std::vector<double>& psi, const SolverConfig& cfg,
                           TruncationState& trunc);

}  // namespace rsot
