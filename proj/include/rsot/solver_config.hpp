#pragma once

#include <stdexcept>
#include <string>

#include "rsot/cost.hpp"

namespace rsot {

enum class TruncationKind { None, Pointwise, Integrated, Geometric };

inline TruncationKind truncation_from_string(const std::string& s) {
  if (s == "none") return TruncationKind::None;
  if (s == "pointwise") return TruncationKind::Pointwise;
  if (s == "integrated") return TruncationKind::Integrated;
  if (s == "geometric") return TruncationKind::Geometric;
  throw std::invalid_argument("unknown truncation kind: " + s);
}

struct SolverConfig {
  double epsilon = 1e-2;          // entropic regularization, cost units
  double delta_tol = 1e-3;        // L1 gradient stopping tolerance
  TruncationKind truncation = TruncationKind::None;
  double tau = 1e-4;              // relative error tolerance (int/geom)
  double delta_thr = 1e-12;       // pointwise contribution threshold
  int lbfgs_memory = 10;
  int max_iterations = 1000;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int scaling_steps = 0;          // N_s: epsilon stages before the target
  CostKind cost_kind = CostKind::SqEuclidean;
  int workers = 1;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(delta_tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must be in (0,1)");
    if (!(delta_thr > 0.0 && delta_thr < 1.0))
      throw std::invalid_argument("delta_thr must be in (0,1)");
    if (lbfgs_memory < 1) throw std::invalid_argument("lbfgs memory must be >= 1");
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
    if (scaling_steps < 0) throw std::invalid_argument("scaling_steps must be >= 0");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  }
};

}  // namespace rsot
