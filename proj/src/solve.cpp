#include "rsot/solve.hpp"

#include <cmath>
#include <stdexcept>

#include "rsot/parallel.hpp"
#include "rsot/spatial_index.hpp"

namespace rsot {

std::vector<double> epsilon_schedule(double eps_target, int steps) {
  if (!(eps_target > 0.0))
    throw std::invalid_argument("epsilon schedule: eps_target must be > 0");
  if (steps < 0)
    throw std::invalid_argument("epsilon schedule: steps must be >= 0");
  std::vector<double> eps;
  for (int s = steps; s >= 0; --s)
    eps.push_back(eps_target * std::pow(10.0, s));
  return eps;
}

StageReport solve_single(const SourceAtoms& atoms, const TargetMeasure& target,
                         const SolverConfig& cfg, std::vector<double>& psi) {
  cfg.validate();
  require_valid(target);
  if (psi.size() != target.size())
    throw std::invalid_argument("solve: psi length != target count");

  const SpatialIndex index(target.points);
  TruncationState trunc;
  trunc.set_weight_stats(target.weights);
  trunc.covering = covering_cost(atoms, target, cfg.cost_kind);

  const Objective objective = [&](const std::vector<double>& p,
                                  const TruncationState& t) {
    DualPotential wrapped{p, Gauge::Raw};
    return evaluate_dual(atoms, target, wrapped, cfg, t, index);
  };
  return lbfgs_minimize(objective, psi, cfg, trunc);
}

std::pair<DualPotential, SolverReport> solve(
    const SourceAtoms& atoms, const TargetMeasure& target,
    const SolverConfig& cfg, std::optional<DualPotential> psi0) {
  cfg.validate();
  std::vector<double> psi =
      psi0 ? psi0->values : std::vector<double>(target.size(), 0.0);
  if (psi.size() != target.size())
    throw std::invalid_argument("solve: psi0 length != target count");

  SolverReport report;
  for (double eps : epsilon_schedule(cfg.epsilon, cfg.scaling_steps)) {
    SolverConfig stage_cfg = cfg;
    stage_cfg.epsilon = eps;
    stage_cfg.scaling_steps = 0;
    report.stages.push_back(solve_single(atoms, target, stage_cfg, psi));
  }
  report.converged = report.stages.back().status == SolveStatus::Converged;
  return {DualPotential{std::move(psi), Gauge::Raw}, report};
}

std::vector<double> softmax_refine(const TargetMeasure& coarse,
                                   const std::vector<double>& coarse_psi,
                                   const PointList& fine_points,
                                   const SourceAtoms& atoms, double eps,
                                   CostKind kind, double cutoff, int workers) {
  if (coarse_psi.size() != coarse.size())
    throw std::invalid_argument("softmax refine: psi/coarse size mismatch");
  require_finite(coarse_psi);
  const std::size_t n_atoms = atoms.size();
  const std::size_t n_coarse = coarse.size();
  const std::size_t n_fine = fine_points.size();
  const bool truncated = std::isfinite(cutoff);

  std::vector<double> log_nu(n_coarse);
  for (std::size_t j = 0; j < n_coarse; ++j)
    log_nu[j] = std::log(coarse.weights[j]);

  // Phase 1: per-atom coarse normalizer ln S(x_q), log-sum-exp stabilized.
  std::vector<double> log_S(n_atoms);
  parallel_blocks(n_atoms, workers, [&](int, std::size_t lo, std::size_t hi) {
    std::vector<double> expo;
    std::vector<std::size_t> candidates;
    for (std::size_t q = lo; q < hi; ++q) {
      const Point& x = atoms.points[q];
      candidates.clear();
      if (truncated) {
        for (std::size_t j = 0; j < n_coarse; ++j)
          if (cost(kind, x, coarse.points[j]) < cutoff) candidates.push_back(j);
        if (candidates.empty()) {
          std::size_t best = 0;
          double best_c = cost(kind, x, coarse.points[0]);
          for (std::size_t j = 1; j < n_coarse; ++j) {
            const double c = cost(kind, x, coarse.points[j]);
            if (c < best_c) {
              best_c = c;
              best = j;
            }
          }
          candidates.push_back(best);
        }
      } else {
        candidates.resize(n_coarse);
        for (std::size_t j = 0; j < n_coarse; ++j) candidates[j] = j;
      }
      expo.resize(candidates.size());
      double emax = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const std::size_t j = candidates[i];
        expo[i] =
            (coarse_psi[j] - cost(kind, x, coarse.points[j])) / eps + log_nu[j];
        emax = std::max(emax, expo[i]);
      }
      double sum = 0.0;
      for (double e : expo) sum += std::exp(e - emax);
      log_S[q] = emax + std::log(sum);
    }
  });

  // Phase 2: per-fine-target log-sum-exp over atoms.
  std::vector<double> psi_init(n_fine);
  parallel_blocks(n_fine, workers, [&](int, std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const Point& y = fine_points[k];
      double emax = -std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < n_atoms; ++q) {
        const double t = -cost(kind, atoms.points[q], y) / eps - log_S[q] +
                         std::log(atoms.masses[q]);
        emax = std::max(emax, t);
      }
      double sum = 0.0;
      for (std::size_t q = 0; q < n_atoms; ++q) {
        const double t = -cost(kind, atoms.points[q], y) / eps - log_S[q] +
                         std::log(atoms.masses[q]);
        sum += std::exp(t - emax);
      }
      psi_init[k] = -eps * (emax + std::log(sum));
    }
  });
  require_finite(psi_init);
  return psi_init;
}

MultilevelSchedule make_multilevel_schedule(int L_mu, int L_nu,
                                            double eps_target,
                                            int scaling_steps) {
  MultilevelSchedule sched;
  sched.L_mu = L_mu;
  sched.L_nu = L_nu;
  sched.L_max = std::max(L_mu, L_nu);
  for (int l = 0; l <= sched.L_max; ++l) {
    MultilevelSchedule::Step step;
    step.i_s = std::max(0, l - (sched.L_max - L_mu));
    step.i_t = std::max(0, l - (sched.L_max - L_nu));
    step.epsilon =
        sched.L_max == 0
            ? eps_target
            : eps_target * std::pow(10.0, scaling_steps *
                                              (1.0 - static_cast<double>(l) /
                                                         sched.L_max));
    sched.steps.push_back(step);
  }
  return sched;
}

std::pair<DualPotential, SolverReport> solve_multilevel(
    const SourceHierarchy& source_hier, const TargetHierarchy& target_hier,
    const SolverConfig& cfg, MultilevelStrategy strategy) {
  cfg.validate();
  if (source_hier.level_count() == 0 || target_hier.level_count() == 0)
    throw std::invalid_argument("multilevel solve: empty hierarchy");

  const bool walk_source = strategy != MultilevelStrategy::TargetOnly;
  const bool walk_target = strategy != MultilevelStrategy::SourceOnly;
  const int L_mu =
      walk_source ? static_cast<int>(source_hier.level_count()) - 1 : 0;
  const int L_nu =
      walk_target ? static_cast<int>(target_hier.level_count()) - 1 : 0;

  const auto source_at = [&](int i) -> const SourceAtoms& {
    return walk_source ? source_hier.levels[static_cast<std::size_t>(i)]
                       : source_hier.levels.back();
  };
  const auto target_at = [&](int i) -> const TargetMeasure& {
    return walk_target ? target_hier.levels[static_cast<std::size_t>(i)]
                       : target_hier.levels.back();
  };

  const MultilevelSchedule sched =
      make_multilevel_schedule(L_mu, L_nu, cfg.epsilon, cfg.scaling_steps);

  SolverReport report;
  std::vector<double> psi(target_at(0).size(), 0.0);
  double last_cutoff = std::numeric_limits<double>::infinity();
  int prev_it = 0;

  for (std::size_t l = 0; l < sched.steps.size(); ++l) {
    const auto& step = sched.steps[l];
    const SourceAtoms& atoms = source_at(step.i_s);
    const TargetMeasure& target = target_at(step.i_t);

    if (l > 0 && step.i_t > prev_it) {
      const TargetMeasure& coarse = target_at(prev_it);
      psi = softmax_refine(coarse, psi, target.points, atoms, step.epsilon,
                           cfg.cost_kind, last_cutoff, cfg.workers);
    }
    // Otherwise inject: psi carries over unchanged.

    SolverConfig stage_cfg = cfg;
    stage_cfg.epsilon = step.epsilon;
    stage_cfg.scaling_steps = 0;

    const SpatialIndex index(target.points);
    TruncationState trunc;
    trunc.set_weight_stats(target.weights);
    trunc.covering = covering_cost(atoms, target, cfg.cost_kind);
    const Objective objective = [&](const std::vector<double>& p,
                                    const TruncationState& t) {
      DualPotential wrapped{p, Gauge::Raw};
      return evaluate_dual(atoms, target, wrapped, stage_cfg, t, index);
    };
    StageReport stage = lbfgs_minimize(objective, psi, stage_cfg, trunc);
    stage.source_level = step.i_s;
    stage.target_level = step.i_t;
    report.stages.push_back(std::move(stage));

    last_cutoff = trunc.cutoff;
    prev_it = step.i_t;
  }
  report.converged = report.stages.back().status == SolveStatus::Converged;
  return {DualPotential{std::move(psi), Gauge::Raw}, report};
}

}  // namespace rsot
