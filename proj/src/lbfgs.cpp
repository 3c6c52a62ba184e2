#include "rsot/lbfgs.hpp"

#include <chrono>
#include <cmath>
#include <deque>

namespace rsot {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double norm1(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

/// Two-loop recursion; H0 is scaled by s.y / y.y from the newest pair.
void apply_inverse_hessian(const std::deque<Correction>& mem,
                           const std::vector<double>& g,
                           std::vector<double>& direction) {
  direction = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * dot(mem[i].s, direction);
    for (std::size_t k = 0; k < direction.size(); ++k)
      direction[k] -= alpha[i] * mem[i].y[k];
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : direction) v *= gamma;
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * dot(mem[i].y, direction);
    for (std::size_t k = 0; k < direction.size(); ++k)
      direction[k] += (alpha[i] - beta) * mem[i].s[k];
  }
  for (double& v : direction) v = -v;
}

struct Probe {
  double alpha = 0.0;
  double J = 0.0;
  double slope = 0.0;
  EvalResult eval;
  bool valid = false;
};

}  // namespace

StageReport lbfgs_minimize(const Objective& objective,
                           std::vector<double>& psi, const SolverConfig& cfg,
                           TruncationState& trunc) {
  const auto t0 = std::chrono::steady_clock::now();
  StageReport report;
  report.epsilon = cfg.epsilon;

  refresh_truncation(trunc, psi, cfg);
  EvalResult current = objective(psi, trunc);
  ++report.evaluations;
  trunc.cached_D = current.D;
  trunc.cached_absJ = std::abs(current.J);
  trunc.has_cache = true;
  report.cutoff_history.push_back(trunc.cutoff);

  std::deque<Correction> memory;
  std::vector<double> direction(psi.size());
  std::vector<double> trial(psi.size());

  const auto finish = [&](SolveStatus status) {
    report.status = status;
    report.final_grad_l1 = norm1(current.gradient);
    report.final_J = current.J;
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return report;
  };

  if (norm1(current.gradient) <= cfg.delta_tol)
    return finish(SolveStatus::Converged);

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    apply_inverse_hessian(memory, current.gradient, direction);
    double slope0 = dot(current.gradient, direction);
    if (!(slope0 < 0.0)) {
      memory.clear();
      for (std::size_t k = 0; k < psi.size(); ++k)
        direction[k] = -current.gradient[k];
      slope0 = dot(current.gradient, direction);
    }

    const double J0 = current.J;
    // Functional comparisons degrade near machine precision; allow this
    // slack in the sufficient-decrease test and rely on slopes beyond it.
    const double noise = 1e-14 * (1.0 + std::abs(J0));
    const double c1 = cfg.wolfe_c1, c2 = cfg.wolfe_c2;

    const auto probe_at = [&](double alpha) -> Probe {
      for (std::size_t k = 0; k < psi.size(); ++k)
        trial[k] = psi[k] + alpha * direction[k];
      Probe p;
      p.alpha = alpha;
      p.eval = objective(trial, trunc);
      ++report.evaluations;
      p.J = p.eval.J;
      p.slope = dot(p.eval.gradient, direction);
      p.valid = true;
      return p;
    };

    // Strong Wolfe line search: doubling until bracketed, then bisection
    // with an interpolated first backtrack for oversized trial steps.
    double alpha =
        (iter == 0) ? 1.0 / std::max(norm2(current.gradient), 1e-30) : 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    Probe accepted;
    Probe fallback;  // best sufficient-decrease point seen

    for (int trial_count = 0; trial_count < 30; ++trial_count) {
      Probe p = probe_at(alpha);
      const bool armijo = p.J <= J0 + c1 * alpha * slope0 + noise;
      if (!armijo) {
        hi = alpha;
        if (lo > 0.0) {
          alpha = 0.5 * (lo + hi);
        } else {
          // Quadratic-interpolation backtrack, clamped so oversized trial
          // steps shrink geometrically.
          const double denom = 2.0 * (p.J - J0 - slope0 * alpha);
          double next =
              denom > 0.0 ? -slope0 * alpha * alpha / denom : 0.5 * alpha;
          alpha = std::min(std::max(next, 0.01 * alpha), 0.5 * alpha);
        }
        continue;
      }
      const bool better_fallback =
          !fallback.valid || p.J < fallback.J - noise ||
          (p.J <= fallback.J + noise &&
           std::abs(p.slope) < std::abs(fallback.slope));
      if (better_fallback) fallback = p;
      if (p.slope < c2 * slope0) {
        // Still descending steeply: move right.
        lo = alpha;
        alpha = std::isinf(hi) ? 2.0 * alpha : 0.5 * (lo + hi);
        continue;
      }
      if (p.slope > -c2 * slope0) {
        // Overshot the valley: move left.
        hi = alpha;
        alpha = 0.5 * (lo + hi);
        continue;
      }
      accepted = std::move(p);
      break;
    }
    if (!accepted.valid && fallback.valid) accepted = std::move(fallback);
    if (!accepted.valid) return finish(SolveStatus::LineSearchFailed);

    Correction corr;
    corr.s.resize(psi.size());
    corr.y.resize(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) {
      corr.s[k] = accepted.alpha * direction[k];
      psi[k] += corr.s[k];
      corr.y[k] = accepted.eval.gradient[k] - current.gradient[k];
    }
    const double sy = dot(corr.s, corr.y);
    if (sy > 1e-12 * norm2(corr.s) * norm2(corr.y)) {
      corr.rho = 1.0 / sy;
      memory.push_back(std::move(corr));
      if (static_cast<int>(memory.size()) > cfg.lbfgs_memory)
        memory.pop_front();
    }
    current = std::move(accepted.eval);
    ++report.iterations;

    // Accepted iterate: refresh potential stats, cutoff, and cached
    // estimates; the next line search runs with these held fixed.
    trunc.cached_D = current.D;
    trunc.cached_absJ = std::abs(current.J);
    refresh_truncation(trunc, psi, cfg);
    report.cutoff_history.push_back(trunc.cutoff);

    if (norm1(current.gradient) <= cfg.delta_tol)
      return finish(SolveStatus::Converged);
  }
  return finish(SolveStatus::MaxIterations);
}

}  // namespace rsot
