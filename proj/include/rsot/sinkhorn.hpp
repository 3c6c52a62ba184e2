#pragma once

#include "rsot/measures.hpp"
#include "rsot/potential.hpp"
#include "rsot/cost.hpp"

namespace rsot {

/// Independent log-domain Sinkhorn solver for the atomized (fully
/// discrete) problem. Alternates the two log-domain updates until the L1
/// target-marginal error drops to `tol`; throws after 1e5 sweeps. Intended
/// as a validation oracle on small instances (N_q * N <= 1e6). Returns the
/// target-side potential gauge-fixed to nu-weighted zero mean.
DualPotential sinkhorn_oracle(const SourceAtoms& atoms,
                              const TargetMeasure& target, double eps,
                              double tol,
                              CostKind kind = CostKind::SqEuclidean);

}  // namespace rsot
