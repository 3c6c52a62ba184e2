#include "rsot/plan.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "rsot/parallel.hpp"
#include "rsot/spatial_index.hpp"

namespace rsot {

PlanView::PlanView(const SourceAtoms& atoms, const TargetMeasure& target,
                   const DualPotential& psi, double eps, CostKind kind,
                   double cutoff, int workers)
    : atoms_(atoms),
      target_(target),
      psi_(psi.values),
      eps_(eps),
      kind_(kind) {
  if (psi_.size() != target_.size())
    throw std::invalid_argument("plan view: psi length != target count");
  require_finite(psi_);

  const std::size_t nq = atoms_.size();
  const std::size_t n = target_.size();
  candidates_.resize(nq);
  log_S_.resize(nq);
  const bool truncated = std::isfinite(cutoff);
  const auto radius = ball_radius(kind_, cutoff);

  const SpatialIndex index(target_.points);
  std::vector<double> log_nu(n);
  for (std::size_t j = 0; j < n; ++j) log_nu[j] = std::log(target_.weights[j]);

  parallel_blocks(nq, workers, [&](int, std::size_t lo, std::size_t hi) {
    std::vector<double> expo;
    for (std::size_t q = lo; q < hi; ++q) {
      auto& cand = candidates_[q];
      if (!truncated) {
        cand.resize(n);
        for (std::size_t j = 0; j < n; ++j) cand[j] = j;
      } else if (radius) {
        index.ball_query(atoms_.points[q], *radius, cand);
      } else {
        for (std::size_t j = 0; j < n; ++j)
          if (cost(kind_, atoms_.points[q], target_.points[j]) < cutoff)
            cand.push_back(j);
      }
      if (cand.empty()) cand.push_back(index.nearest(atoms_.points[q]));

      expo.resize(cand.size());
      double emax = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cand.size(); ++i) {
        const std::size_t j = cand[i];
        expo[i] =
            (psi_[j] - cost(kind_, atoms_.points[q], target_.points[j])) / eps_ +
            log_nu[j];
        emax = std::max(emax, expo[i]);
      }
      double sum = 0.0;
      for (double e : expo) sum += std::exp(e - emax);
      log_S_[q] = emax + std::log(sum);
    }
  });
}

void PlanView::set_convergence(double grad_l1, double delta_tol) {
  converged_known_ = true;
  converged_ = grad_l1 <= delta_tol;
}

std::vector<std::pair<std::size_t, double>> PlanView::plan_density(
    std::size_t q) const {
  std::vector<std::pair<std::size_t, double>> p;
  p.reserve(candidates_[q].size());
  for (std::size_t j : candidates_[q]) {
    const double e =
        (psi_[j] - cost(kind_, atoms_.points[q], target_.points[j])) / eps_ +
        std::log(target_.weights[j]);
    p.emplace_back(j, std::exp(e - log_S_[q]));
  }
  return p;
}

std::vector<double> PlanView::target_marginals() const {
  std::vector<double> marg(target_.size(), 0.0);
  for (std::size_t q = 0; q < atoms_.size(); ++q)
    for (const auto& [j, pj] : plan_density(q))
      marg[j] += pj * atoms_.masses[q];
  return marg;
}

std::vector<double> PlanView::conditional_density(std::size_t j) const {
  if (converged_known_ && !converged_ && !warned_) {
    std::cerr << "warning: conditional density requested from an "
                 "unconverged plan\n";
    warned_ = true;
  }
  std::vector<double> mu(atoms_.size(), 0.0);
  double tilde = 0.0;
  for (std::size_t q = 0; q < atoms_.size(); ++q) {
    for (const auto& [cand, pj] : plan_density(q)) {
      if (cand == j) {
        mu[q] = pj * atoms_.masses[q];
        tilde += mu[q];
      }
    }
  }
  if (tilde < 1e-30)
    throw std::runtime_error("target starved: index " + std::to_string(j));
  for (double& v : mu) v /= tilde;
  return mu;
}

Point PlanView::conditional_barycenter(std::size_t j) const {
  const std::vector<double> mu = conditional_density(j);
  Point t{0.0, 0.0, 0.0};
  for (std::size_t q = 0; q < atoms_.size(); ++q)
    t = t + mu[q] * atoms_.points[q];
  return t;
}

PointList PlanView::all_conditional_barycenters() const {
  const std::size_t n = target_.size();
  PointList first_moment(n, Point{0.0, 0.0, 0.0});
  std::vector<double> tilde(n, 0.0);
  for (std::size_t q = 0; q < atoms_.size(); ++q) {
    for (const auto& [j, pj] : plan_density(q)) {
      const double w = pj * atoms_.masses[q];
      first_moment[j] = first_moment[j] + w * atoms_.points[q];
      tilde[j] += w;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (tilde[j] < 1e-30)
      throw std::runtime_error("target starved: index " + std::to_string(j));
    first_moment[j] = (1.0 / tilde[j]) * first_moment[j];
  }
  return first_moment;
}

MapSample barycentric_map(const PlanView& plan) {
  MapSample map;
  map.kind = MapKind::Barycentric;
  const auto& atoms = plan.atoms();
  const auto& target = plan.target();
  map.mapped.resize(atoms.size());
  map.displacement.resize(atoms.size());
  for (std::size_t q = 0; q < atoms.size(); ++q) {
    Point t{0.0, 0.0, 0.0};
    for (const auto& [j, pj] : plan.plan_density(q))
      t = t + pj * target.points[j];
    map.mapped[q] = t;
    map.displacement[q] = distance(t, atoms.points[q]);
  }
  return map;
}

MapSample modal_map(const PlanView& plan) {
  MapSample map;
  map.kind = MapKind::Modal;
  const auto& atoms = plan.atoms();
  const auto& target = plan.target();
  map.mapped.resize(atoms.size());
  map.target_index.resize(atoms.size());
  map.displacement.resize(atoms.size());
  for (std::size_t q = 0; q < atoms.size(); ++q) {
    // argmax of psi_j - c + eps ln nu_j; ties break to the lowest index.
    std::size_t best = target.size();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j : plan.candidates(q)) {
      const double score =
          plan.psi_value(j) -
          cost(plan.cost_kind(), atoms.points[q], target.points[j]) +
          plan.epsilon() * std::log(target.weights[j]);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    map.target_index[q] = best;
    map.mapped[q] = target.points[best];
    map.displacement[q] = distance(map.mapped[q], atoms.points[q]);
  }
  return map;
}

PointList displacement_interpolate(const PlanView& plan, const MapSample& map,
                                   double alpha) {
  if (map.kind != MapKind::Barycentric)
    throw std::invalid_argument("interpolation requires a barycentric map");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0,1]");
  const auto& atoms = plan.atoms();
  PointList out(atoms.size());
  for (std::size_t q = 0; q < atoms.size(); ++q)
    out[q] = (1.0 - alpha) * atoms.points[q] + alpha * map.mapped[q];
  return out;
}

TransferredField transfer_field(const PlanView& plan, const MapSample& map,
                                const std::vector<double>& field) {
  const auto& atoms = plan.atoms();
  if (field.size() != atoms.size())
    throw std::invalid_argument("field length != atom count");
  TransferredField out;
  out.points = map.mapped;
  out.values = field;
  if (map.kind == MapKind::Modal) {
    const std::size_t n = plan.target().size();
    out.first_value_per_target.assign(n, 0.0);
    out.mean_value_per_target.assign(n, 0.0);
    out.target_hit.assign(n, false);
    std::vector<double> mass(n, 0.0);
    for (std::size_t q = 0; q < atoms.size(); ++q) {
      const std::size_t j = map.target_index[q];
      if (!out.target_hit[j]) {
        out.target_hit[j] = true;
        out.first_value_per_target[j] = field[q];  // lowest atom index wins
      }
      out.mean_value_per_target[j] += field[q] * atoms.masses[q];
      mass[j] += atoms.masses[q];
    }
    for (std::size_t j = 0; j < n; ++j)
      if (mass[j] > 0.0) out.mean_value_per_target[j] /= mass[j];
  }
  return out;
}

}  // namespace rsot
