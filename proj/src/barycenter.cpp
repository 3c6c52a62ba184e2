#include "rsot/barycenter.hpp"

#include <cmath>
#include <stdexcept>

#include "rsot/plan.hpp"
#include "rsot/potential.hpp"
#include "rsot/solve.hpp"

namespace rsot {

void BarycenterConfig::validate() const {
  if (lambdas.empty()) throw std::invalid_argument("barycenter: no lambdas");
  double sum = 0.0;
  for (double l : lambdas) {
    if (!(l > 0.0)) throw std::invalid_argument("barycenter: lambda <= 0");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("barycenter: lambdas must sum to 1");
  if (!(damping > 0.0 && damping <= 1.0))
    throw std::invalid_argument("barycenter: damping must lie in (0,1]");
  if (support_size == 0)
    throw std::invalid_argument("barycenter: support size must be >= 1");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("barycenter: steps must be > 0");
  if (max_outer_iterations < 1)
    throw std::invalid_argument("barycenter: max iterations must be >= 1");
  inner.validate();
}

std::pair<PointList, BarycenterTrace> barycenter_lloyd(
    const std::vector<BarycenterSource>& sources, const BarycenterConfig& cfg,
    const PointList& initial_points) {
  cfg.validate();
  if (sources.size() != cfg.lambdas.size())
    throw std::invalid_argument("barycenter: sources/lambdas size mismatch");
  if (initial_points.size() != cfg.support_size)
    throw std::invalid_argument("barycenter: initial points != support size");

  const std::size_t nb = cfg.support_size;
  const std::size_t k_sources = sources.size();
  PointList points = initial_points;

  TargetMeasure nu;
  nu.dim = sources[0].atoms.dim;
  nu.weights.assign(nb, 1.0 / static_cast<double>(nb));

  BarycenterTrace trace;
  // Warm starts across outer iterations, one potential per source.
  std::vector<std::vector<double>> psis(k_sources,
                                        std::vector<double>(nb, 0.0));

  for (int outer = 0; outer < cfg.max_outer_iterations; ++outer) {
    nu.points = points;
    PointList update(nb, Point{0.0, 0.0, 0.0});
    std::vector<SolverReport> reports;

    for (std::size_t i = 0; i < k_sources; ++i) {
      SolverReport report;
      if (outer == 0 && sources[i].hierarchy != nullptr) {
        // Source-side multilevel bootstraps the very first solve only;
        // later iterations reuse the warm start instead.
        TargetHierarchy single;
        single.levels.push_back(nu);
        auto [psi, rep] = solve_multilevel(*sources[i].hierarchy, single,
                                           cfg.inner,
                                           MultilevelStrategy::SourceOnly);
        psis[i] = psi.values;
        report = std::move(rep);
      } else {
        StageReport stage =
            solve_single(sources[i].atoms, nu, cfg.inner, psis[i]);
        report.converged = stage.status == SolveStatus::Converged;
        report.stages.push_back(std::move(stage));
      }
      reports.push_back(std::move(report));

      PlanView plan(sources[i].atoms, nu, DualPotential{psis[i], Gauge::Raw},
                    cfg.inner.epsilon, cfg.inner.cost_kind);
      const PointList t_ij = plan.all_conditional_barycenters();
      for (std::size_t j = 0; j < nb; ++j)
        update[j] = update[j] + cfg.lambdas[i] * t_ij[j];
    }

    double rms = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const Point next = (1.0 - cfg.damping) * points[j] +
                         cfg.damping * update[j];
      rms += squared_distance(next, points[j]);
      points[j] = next;
    }
    rms = std::sqrt(rms / static_cast<double>(nb));

    trace.rms_movement.push_back(rms);
    trace.snapshots.push_back(points);
    trace.inner_reports.insert(trace.inner_reports.end(),
                               std::make_move_iterator(reports.begin()),
                               std::make_move_iterator(reports.end()));
    trace.iterations = outer + 1;
    if (rms <= cfg.rms_tol) {
      trace.converged = true;
      break;
    }
  }
  return {points, trace};
}

BarycenterState barycenter_general_step(
    const BarycenterState& state,
    const std::vector<std::vector<double>>& potentials,
    const std::vector<PointList>& conditional_means,
    const BarycenterConfig& cfg) {
  const std::size_t nb = state.points.size();
  if (state.weights.size() != nb)
    throw std::invalid_argument("barycenter step: state size mismatch");
  if (potentials.size() != cfg.lambdas.size() ||
      conditional_means.size() != cfg.lambdas.size())
    throw std::invalid_argument("barycenter step: per-source data mismatch");

  // dnu from the envelope theorem: the gauge-fixed dual potentials.
  std::vector<double> dnu(nb, 0.0);
  for (std::size_t i = 0; i < potentials.size(); ++i) {
    DualPotential fixed =
        gauge_fixed(DualPotential{potentials[i], Gauge::Raw}, state.weights);
    for (std::size_t j = 0; j < nb; ++j)
      dnu[j] += cfg.lambdas[i] * fixed.values[j];
  }

  BarycenterState next;
  next.weights.resize(nb);
  double total = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    next.weights[j] =
        state.weights[j] *
        std::exp(-cfg.alpha * state.weights[j] * dnu[j]);
    total += next.weights[j];
  }
  for (double& w : next.weights) {
    w /= total;
    if (!(w > 0.0))
      throw std::runtime_error("barycenter step: weight collapsed to zero");
  }

  next.points.resize(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    Point dy{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < conditional_means.size(); ++i)
      dy = dy + (cfg.lambdas[i] * state.weights[j]) *
                    (state.points[j] - conditional_means[i][j]);
    next.points[j] = state.points[j] - cfg.beta * dy;
  }
  return next;
}

}  // namespace rsot
