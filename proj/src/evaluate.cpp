#include "rsot/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsot/parallel.hpp"

namespace rsot {

void TruncationState::set_psi_stats(const std::vector<double>& psi) {
  psi_max = *std::max_element(psi.begin(), psi.end());
  psi_min = *std::min_element(psi.begin(), psi.end());
  psi_range = psi_max - psi_min;
}

void TruncationState::set_weight_stats(const std::vector<double>& nu) {
  nu_max = *std::max_element(nu.begin(), nu.end());
  nu_min = *std::min_element(nu.begin(), nu.end());
}

double cutoff_pointwise(const TruncationState& trunc, double eps,
                        double delta_thr) {
  return trunc.psi_max + eps * std::log(trunc.nu_max / delta_thr);
}

double cutoff_integrated(const TruncationState& trunc, double eps, double tau) {
  const double absJ = std::max(trunc.cached_absJ, 1e-30);
  if (absJ <= 1e-30)
    throw std::runtime_error("functional estimate degenerate");
  const double c =
      trunc.psi_max + eps * std::log(eps * trunc.cached_D / (tau * absJ));
  return std::max(c, trunc.covering);
}

double cutoff_geometric(const TruncationState& trunc, double eps, double tau) {
  const double absJ = std::max(trunc.cached_absJ, 1e-30);
  if (absJ <= 1e-30)
    throw std::runtime_error("functional estimate degenerate");
  const double c = trunc.covering + trunc.psi_range +
                   eps * std::log(eps / (trunc.nu_min * tau * absJ));
  return std::max(c, trunc.covering);
}

double cutoff_bootstrap(const TruncationState& trunc, double eps, double tau) {
  const double c = trunc.covering + trunc.psi_range +
                   eps * std::log(eps / (trunc.nu_min * tau));
  return std::max(c, trunc.covering);
}

void refresh_truncation(TruncationState& trunc, const std::vector<double>& psi,
                        const SolverConfig& cfg) {
  trunc.set_psi_stats(psi);
  switch (cfg.truncation) {
    case TruncationKind::None:
      trunc.cutoff = std::numeric_limits<double>::infinity();
      break;
    case TruncationKind::Pointwise:
      trunc.cutoff = cutoff_pointwise(trunc, cfg.epsilon, cfg.delta_thr);
      break;
    case TruncationKind::Integrated:
      trunc.cutoff = trunc.has_cache
                         ? cutoff_integrated(trunc, cfg.epsilon, cfg.tau)
                         : cutoff_bootstrap(trunc, cfg.epsilon, cfg.tau);
      break;
    case TruncationKind::Geometric:
      trunc.cutoff = trunc.has_cache
                         ? cutoff_geometric(trunc, cfg.epsilon, cfg.tau)
                         : cutoff_bootstrap(trunc, cfg.epsilon, cfg.tau);
      break;
  }
}

namespace {

struct Partial {
  double J = 0.0;
  double D = 0.0;
  std::vector<double> g;
  std::uint64_t pairs = 0;
  std::uint64_t empty = 0;
};

}  // namespace

EvalResult evaluate_dual(const SourceAtoms& atoms, const TargetMeasure& target,
                         const DualPotential& psi, const SolverConfig& cfg,
                         const TruncationState& trunc,
                         const SpatialIndex& index) {
  const std::size_t n_targets = target.size();
  if (psi.size() != n_targets)
    throw std::invalid_argument("evaluate_dual: psi length != target count");
  require_finite(psi.values);

  const double eps = cfg.epsilon;
  const double cutoff = trunc.cutoff;
  const bool truncated = std::isfinite(cutoff);
  const auto radius = ball_radius(cfg.cost_kind, cutoff);
  const bool use_index = truncated && radius.has_value();

  std::vector<double> log_nu(n_targets);
  for (std::size_t j = 0; j < n_targets; ++j)
    log_nu[j] = std::log(target.weights[j]);

  const std::size_t n_atoms = atoms.size();
  const int workers = std::max(1, cfg.workers);
  std::vector<Partial> partials(static_cast<std::size_t>(workers));

  parallel_blocks(n_atoms, workers, [&](int w, std::size_t lo, std::size_t hi) {
    Partial& part = partials[static_cast<std::size_t>(w)];
    part.g.assign(n_targets, 0.0);
    std::vector<std::size_t> candidates;
    std::vector<double> expo;
    for (std::size_t q = lo; q < hi; ++q) {
      const Point& x = atoms.points[q];
      const double mq = atoms.masses[q];

      candidates.clear();
      if (!truncated) {
        candidates.resize(n_targets);
        for (std::size_t j = 0; j < n_targets; ++j) candidates[j] = j;
      } else if (use_index) {
        index.ball_query(x, *radius, candidates);
      } else {
        for (std::size_t j = 0; j < n_targets; ++j)
          if (cost(cfg.cost_kind, x, target.points[j]) < cutoff)
            candidates.push_back(j);
      }
      if (candidates.empty()) {
        ++part.empty;
        candidates.push_back(index.nearest(x));
      }
      part.pairs += candidates.size();

      expo.resize(candidates.size());
      double emax = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const std::size_t j = candidates[i];
        expo[i] = (psi.values[j] - cost(cfg.cost_kind, x, target.points[j])) / eps +
                  log_nu[j];
        emax = std::max(emax, expo[i]);
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        expo[i] = std::exp(expo[i] - emax);
        sum += expo[i];
      }
      const double log_S = emax + std::log(sum);
      part.J += eps * log_S * mq;
      part.D += mq * std::exp(-log_S);
      const double scale = mq / sum;
      for (std::size_t i = 0; i < candidates.size(); ++i)
        part.g[candidates[i]] += expo[i] * scale;
    }
  });

  EvalResult result;
  result.gradient.assign(n_targets, 0.0);
  for (const Partial& part : partials) {
    if (part.g.empty()) continue;
    result.J += part.J;
    result.D += part.D;
    result.candidate_pairs += part.pairs;
    result.empty_candidate_atoms += part.empty;
    for (std::size_t j = 0; j < n_targets; ++j)
      result.gradient[j] += part.g[j];
  }
  for (std::size_t j = 0; j < n_targets; ++j) {
    result.J -= psi.values[j] * target.weights[j];
    result.gradient[j] -= target.weights[j];
  }
  result.atoms_visited = n_atoms;
  return result;
}

}  // namespace rsot
