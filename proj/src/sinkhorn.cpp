#include "rsot/sinkhorn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rsot {

DualPotential sinkhorn_oracle(const SourceAtoms& atoms,
                              const TargetMeasure& target, double eps,
                              double tol, CostKind kind) {
  const std::size_t nq = atoms.size();
  const std::size_t n = target.size();
  if (nq == 0 || n == 0)
    throw std::invalid_argument("sinkhorn: empty input");
  if (nq * n > 1000000)
    throw std::invalid_argument("sinkhorn: instance too large (Nq*N > 1e6)");

  std::vector<double> c(nq * n);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t j = 0; j < n; ++j)
      c[q * n + j] = cost(kind, atoms.points[q], target.points[j]);

  std::vector<double> log_nu(n), log_m(nq);
  for (std::size_t j = 0; j < n; ++j) log_nu[j] = std::log(target.weights[j]);
  for (std::size_t q = 0; q < nq; ++q) log_m[q] = std::log(atoms.masses[q]);

  std::vector<double> phi(nq, 0.0), psi(n, 0.0), term(std::max(nq, n));

  const auto lse = [&](std::size_t count) {
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) emax = std::max(emax, term[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += std::exp(term[i] - emax);
    return emax + std::log(sum);
  };

  for (int sweep = 0; sweep < 100000; ++sweep) {
    // phi update: enforce the source marginal exactly.
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t j = 0; j < n; ++j)
        term[j] = log_nu[j] + (psi[j] - c[q * n + j]) / eps;
      phi[q] = -eps * lse(n);
    }
    // Target marginal violation with the current pair (phi, psi).
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double tilde = 0.0;
      for (std::size_t q = 0; q < nq; ++q)
        tilde += atoms.masses[q] *
                 std::exp((phi[q] + psi[j] - c[q * n + j]) / eps);
      err += std::abs(target.weights[j] * tilde - target.weights[j]);
    }
    if (err <= tol) {
      DualPotential out{std::move(psi), Gauge::Raw};
      return gauge_fixed(out, target.weights);
    }
    // psi update: enforce the target marginal exactly.
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t q = 0; q < nq; ++q)
        term[q] = log_m[q] + (phi[q] - c[q * n + j]) / eps;
      psi[j] = -eps * lse(nq);
    }
  }
  throw std::runtime_error("sinkhorn: iteration cap exceeded");
}

}  // namespace rsot
