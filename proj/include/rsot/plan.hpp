#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "rsot/cost.hpp"
#include "rsot/measures.hpp"
#include "rsot/potential.hpp"

namespace rsot {

/// Read-only view of the optimal plan induced by a converged potential.
/// Per-atom candidate sets and log-normalizers are cached once at
/// construction; all extraction operations are pure reads afterwards.
class PlanView {
 public:
  PlanView(const SourceAtoms& atoms, const TargetMeasure& target,
           const DualPotential& psi, double eps, CostKind kind,
           double cutoff = std::numeric_limits<double>::infinity(),
           int workers = 1);

  /// Marks the plan as coming from a converged solve; conditional
  /// operations warn on stderr when this is missing or out of tolerance.
  void set_convergence(double grad_l1, double delta_tol);

  const SourceAtoms& atoms() const { return atoms_; }
  const TargetMeasure& target() const { return target_; }
  double epsilon() const { return eps_; }
  CostKind cost_kind() const { return kind_; }
  double psi_value(std::size_t j) const { return psi_[j]; }
  const std::vector<std::size_t>& candidates(std::size_t q) const {
    return candidates_[q];
  }

  /// Sparse conditional distribution over targets at atom q: pairs
  /// (target index, probability), entries >= 0 summing to one.
  std::vector<std::pair<std::size_t, double>> plan_density(std::size_t q) const;

  /// Per-atom weights of the conditional source density given target j:
  /// p_j(x_q) m_q / nu_tilde_j. Throws "target starved" when
  /// nu_tilde_j < 1e-30.
  std::vector<double> conditional_density(std::size_t j) const;

  /// Mass received by each target under the plan (the discrete marginal).
  std::vector<double> target_marginals() const;

  /// Conditional barycenter T_j = sum_q mu_j(x_q) x_q.
  Point conditional_barycenter(std::size_t j) const;

  /// All conditional barycenters in one pass over the atoms. Throws
  /// "target starved" naming the first index with vanishing mass.
  PointList all_conditional_barycenters() const;

 private:
  friend struct MapBuilder;
  SourceAtoms atoms_;
  TargetMeasure target_;
  std::vector<double> psi_;
  double eps_;
  CostKind kind_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<double> log_S_;
  mutable bool warned_ = false;
  bool converged_known_ = false;
  bool converged_ = false;
};

enum class MapKind { Barycentric, Modal };

/// Deterministic map extracted from the plan, sampled at the source atoms.
struct MapSample {
  MapKind kind = MapKind::Barycentric;
  PointList mapped;                      // T(x_q)
  std::vector<std::size_t> target_index; // modal only
  std::vector<double> displacement;      // ||T(x_q) - x_q||
};

/// Expected target location per atom: T(x_q) = sum_j p_j(x_q) y_j.
MapSample barycentric_map(const PlanView& plan);

/// Most probable target per atom: argmax_j (psi_j - c + eps ln nu_j),
/// ties resolved to the lowest index.
MapSample modal_map(const PlanView& plan);

/// McCann displacement interpolation x_alpha = (1-alpha) x + alpha T(x).
/// Requires a barycentric map and alpha in [0,1].
PointList displacement_interpolate(const PlanView& plan, const MapSample& map,
                                   double alpha);

struct TransferredField {
  PointList points;                 // mapped locations
  std::vector<double> values;      // source value carried to T(x_q)
  // Modal maps can collide several atoms onto one target; both resolutions
  // are reported per target index.
  std::vector<double> first_value_per_target;   // lowest source atom wins
  std::vector<double> mean_value_per_target;    // mass-weighted mean
  std::vector<bool> target_hit;
};

/// Pushes a per-atom scalar field through the map.
TransferredField transfer_field(const PlanView& plan, const MapSample& map,
                                const std::vector<double>& field);

}  // namespace rsot
