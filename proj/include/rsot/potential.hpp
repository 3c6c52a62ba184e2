#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsot {

enum class Gauge { Raw, MeanZero };

/// Discrete dual potential psi over the target points. The continuous
/// potential is always derived from psi on demand and never stored.
struct DualPotential {
  std::vector<double> values;
  Gauge gauge = Gauge::Raw;

  std::size_t size() const { return values.size(); }
};

/// nu-weighted mean of psi.
inline double weighted_mean(const std::vector<double>& psi,
                            const std::vector<double>& nu) {
  if (psi.size() != nu.size())
    throw std::invalid_argument("gauge: psi/nu size mismatch");
  double mean = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) mean += psi[j] * nu[j];
  return mean;
}

/// Canonical representative: subtracts the nu-weighted mean, removing the
/// constant-shift null direction of the dual functional.
inline DualPotential gauge_fixed(const DualPotential& psi,
                                 const std::vector<double>& nu) {
  DualPotential out;
  out.values = psi.values;
  const double mean = weighted_mean(out.values, nu);
  for (double& v : out.values) v -= mean;
  out.gauge = Gauge::MeanZero;
  return out;
}

inline void require_finite(const std::vector<double>& psi) {
  for (double v : psi)
    if (!std::isfinite(v))
      throw std::invalid_argument("potential has non-finite entries");
}

}  // namespace rsot
