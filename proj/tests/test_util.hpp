#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rsot/cost.hpp"
#include "rsot/measures.hpp"
#include "rsot/mesh.hpp"
#include "rsot/potential.hpp"
#include "rsot/quadrature.hpp"

namespace rsot::testing {

/// Brute-force ball scan, the oracle for all spatial-index queries.
inline std::vector<std::size_t> brute_force_ball(const PointList& points,
                                                 const Point& center,
                                                 double radius) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (distance(points[i], center) < radius) out.push_back(i);
  return out;
}

/// Direct two-loop evaluation of the discretized dual functional; no
/// truncation, no stabilization tricks beyond the per-atom max shift.
/// Independent of the production evaluation path.
inline double dual_functional_reference(const SourceAtoms& atoms,
                                        const TargetMeasure& target,
                                        const std::vector<double>& psi,
                                        double eps, CostKind kind) {
  double J = 0.0;
  for (std::size_t q = 0; q < atoms.size(); ++q) {
    double emax = -1e300;
    std::vector<double> e(target.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
      e[j] = (psi[j] - cost(kind, atoms.points[q], target.points[j])) / eps +
             std::log(target.weights[j]);
      emax = std::max(emax, e[j]);
    }
    double sum = 0.0;
    for (double v : e) sum += std::exp(v - emax);
    J += eps * (emax + std::log(sum)) * atoms.masses[q];
  }
  for (std::size_t j = 0; j < target.size(); ++j)
    J -= psi[j] * target.weights[j];
  return J;
}

/// Central finite differences of the reference functional.
inline std::vector<double> fd_gradient(const SourceAtoms& atoms,
                                       const TargetMeasure& target,
                                       const std::vector<double>& psi,
                                       double eps, CostKind kind) {
  std::vector<double> g(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(psi[k]));
    std::vector<double> plus = psi, minus = psi;
    plus[k] += h;
    minus[k] -= h;
    g[k] = (dual_functional_reference(atoms, target, plus, eps, kind) -
            dual_functional_reference(atoms, target, minus, eps, kind)) /
           (2.0 * h);
  }
  return g;
}

/// Uniform atoms on [0,1] from the interval mesh, Gauss order r.
inline SourceAtoms uniform_interval_atoms(int cells, int order = 2) {
  const SimplicialMesh mesh = make_interval_mesh(0.0, 1.0, cells);
  DensityField rho;
  rho.values.assign(mesh.vertex_count(), 1.0);
  return atomize(mesh, rho, QuadratureSpec{order});
}

/// The recurring 1D fixture: y = (0.2, 0.8), nu = (0.25, 0.75). The
/// unregularized potential difference is 0.15 by the monotone-cell
/// construction (boundary at mu([0,b]) = nu_1, i.e. b = 1/4).
inline TargetMeasure asymmetric_1d_target() {
  TargetMeasure t;
  t.dim = 1;
  t.points = {make_point(0.2), make_point(0.8)};
  t.weights = {0.25, 0.75};
  return t;
}

inline TargetMeasure symmetric_1d_target() {
  TargetMeasure t;
  t.dim = 1;
  t.points = {make_point(0.25), make_point(0.75)};
  t.weights = {0.5, 0.5};
  return t;
}

/// Random instance generator shared by the property tests.
struct RandomInstance {
  SourceAtoms atoms;
  TargetMeasure target;
  std::vector<double> psi;
};

inline RandomInstance random_instance(std::mt19937_64& rng, int dim,
                                      std::size_t n_targets,
                                      std::size_t n_atoms,
                                      double psi_scale = 0.1) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomInstance inst;
  inst.atoms.dim = dim;
  for (std::size_t q = 0; q < n_atoms; ++q) {
    Point p{0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) p[static_cast<std::size_t>(c)] = unit(rng);
    inst.atoms.points.push_back(p);
    inst.atoms.quad_weights.push_back(1.0);
    inst.atoms.densities.push_back(1.0);
    inst.atoms.masses.push_back(unit(rng) + 0.1);
  }
  normalize_masses(inst.atoms.masses);

  inst.target.dim = dim;
  double wsum = 0.0;
  for (std::size_t j = 0; j < n_targets; ++j) {
    Point p{0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) p[static_cast<std::size_t>(c)] = unit(rng);
    inst.target.points.push_back(p);
    inst.target.weights.push_back(unit(rng) + 0.1);
    wsum += inst.target.weights.back();
  }
  for (double& w : inst.target.weights) w /= wsum;

  std::normal_distribution<double> gauss(0.0, psi_scale);
  inst.psi.resize(n_targets);
  for (double& v : inst.psi) v = gauss(rng);
  return inst;
}

inline double linf_diff(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace rsot::testing
