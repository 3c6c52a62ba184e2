#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsot/point.hpp"

namespace rsot {

/// Discrete target measure: support points y_j with positive weights
/// summing to one.
struct TargetMeasure {
  int dim = 0;
  PointList points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Atomized source measure. Atoms carry the quadrature location, the
/// quadrature weight, the density value there, and the normalized mass
/// m_q proportional to density * weight with sum(m) = 1.
struct SourceAtoms {
  int dim = 0;
  PointList points;
  std::vector<double> quad_weights;
  std::vector<double> densities;
  std::vector<double> masses;

  std::size_t size() const { return points.size(); }
};

struct MeasureDiagnostics {
  double weight_sum_deviation = 0.0;           // |sum(nu) - 1|
  std::vector<std::size_t> nonpositive_weights;
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_points;
  bool ok() const {
    return weight_sum_deviation <= 1e-12 && nonpositive_weights.empty() &&
           duplicate_points.empty();
  }
};

/// Diagnostic check of a target measure; never throws.
MeasureDiagnostics validate_measure(const TargetMeasure& target);

/// Throws unless weights are positive and sum to one within 1e-12.
void require_valid(const TargetMeasure& target);

/// Rescales masses so they sum to exactly one; throws on zero total mass.
void normalize_masses(std::vector<double>& masses);

}  // namespace rsot
