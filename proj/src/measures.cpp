#include "rsot/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace rsot {

MeasureDiagnostics validate_measure(const TargetMeasure& target) {
  MeasureDiagnostics diag;
  double sum = 0.0;
  for (std::size_t j = 0; j < target.weights.size(); ++j) {
    sum += target.weights[j];
    if (!(target.weights[j] > 0.0)) diag.nonpositive_weights.push_back(j);
  }
  diag.weight_sum_deviation = std::abs(sum - 1.0);
  for (std::size_t a = 0; a < target.points.size(); ++a)
    for (std::size_t b = a + 1; b < target.points.size(); ++b)
      if (squared_distance(target.points[a], target.points[b]) == 0.0)
        diag.duplicate_points.emplace_back(a, b);
  return diag;
}

void require_valid(const TargetMeasure& target) {
  if (target.points.empty())
    throw std::invalid_argument("target measure: empty support");
  if (target.points.size() != target.weights.size())
    throw std::invalid_argument("target measure: point/weight size mismatch");
  double sum = 0.0;
  for (double w : target.weights) {
    if (!(w > 0.0))
      throw std::invalid_argument("target measure: nonpositive weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("target measure: weights sum to " +
                                std::to_string(sum));
}

void normalize_masses(std::vector<double>& masses) {
  double total = 0.0;
  for (double m : masses) total += m;
  if (!(total > 0.0)) throw std::runtime_error("zero total mass");
  for (double& m : masses) m /= total;
}

}  // namespace rsot
