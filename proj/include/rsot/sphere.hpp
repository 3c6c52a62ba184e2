#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rsot/lbfgs.hpp"
#include "rsot/measures.hpp"
#include "rsot/solver_config.hpp"

namespace rsot {

/// Geometry of the unit 2-sphere: geodesic distance, log and exp maps.
/// Points are unit vectors in R^3; tangent vectors live in R^3 and are
/// orthogonal to the base point.
namespace sphere {

/// log_p(q): tangent vector at p pointing toward q with length d_g(p,q).
/// Throws when q is within 1e-3 of the antipode of p.
Point log_map(const Point& p, const Point& q);

/// exp_p(v): walks the geodesic from p in direction v for length ||v||.
Point exp_map(const Point& p, const Point& v);

/// Uniformly distributed random unit vectors (seeded).
PointList random_points(std::size_t n, std::uint64_t seed);

/// Deterministic near-uniform Fibonacci lattice on the sphere, weighted by
/// the density; the result is a valid SourceAtoms with mass one.
SourceAtoms fibonacci_atoms(std::size_t n,
                            const std::function<double(const Point&)>& density);

/// Smooth non-uniform test density max(Y_20, 0) + 0.1 built from the
/// degree-2 zonal spherical harmonic, before normalization.
double zonal_test_density(const Point& p);

}  // namespace sphere

struct RiemannianBarycenterResult {
  Point point;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Weighted Frechet mean on the sphere by tangent-space gradient descent:
///   v = sum_q (-2) log_y(x_q) mu_q,   y <- exp_y(-alpha v)
/// until ||v|| <= tol.
RiemannianBarycenterResult riemannian_barycenter(
    const PointList& support, const std::vector<double>& weights,
    const Point& y0, double step = 0.25, double tol = 1e-6,
    int max_iterations = 500);

struct BlueNoiseConfig {
  std::size_t point_count = 16;
  double movement_tol = 1e-3;     // relative ||dY|| / ||Y|| stop rule
  int max_outer_iterations = 200;
  double rb_step = 0.25;
  double rb_tol = 1e-6;
  int rb_max_iterations = 500;
  std::uint64_t seed = 0;
  SolverConfig inner;             // inner RSOT solver (geodesic cost)
};

struct BlueNoiseTrace {
  std::vector<double> relative_movement;
  int iterations = 0;
  bool converged = false;
};

/// Lloyd iteration on the sphere: alternate an RSOT solve under the
/// squared geodesic cost (full-scan candidate generation) with one
/// Riemannian barycenter update per point. Initial points are sampled
/// uniformly with the configured seed.
std::pair<PointList, BlueNoiseTrace> blue_noise_sphere(
    const SourceAtoms& atoms, const BlueNoiseConfig& cfg);

}  // namespace rsot
