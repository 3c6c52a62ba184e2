#include "rsot/sphere.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rsot/parallel.hpp"
#include "rsot/plan.hpp"
#include "rsot/solve.hpp"

namespace rsot {

namespace sphere {

namespace {

Point normalized(const Point& p) {
  const double n = norm(p);
  if (!(n > 0.0)) throw std::runtime_error("sphere: zero vector");
  return (1.0 / n) * p;
}

}  // namespace

Point log_map(const Point& p, const Point& q) {
  const double theta = geodesic_distance(p, q);
  if (theta > std::numbers::pi - 1e-3)
    throw std::runtime_error("sphere: log map near antipode");
  if (theta < 1e-14) return Point{0.0, 0.0, 0.0};
  const Point u = q - dot(p, q) * p;  // q minus cos(theta) p
  const double un = norm(u);
  return (theta / un) * u;
}

Point exp_map(const Point& p, const Point& v) {
  const double theta = norm(v);
  if (theta < 1e-14) return p;
  const Point out = std::cos(theta) * p + (std::sin(theta) / theta) * v;
  return normalized(out);
}

PointList random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PointList out;
  out.reserve(n);
  while (out.size() < n) {
    Point p{gauss(rng), gauss(rng), gauss(rng)};
    const double len = norm(p);
    if (len < 1e-8) continue;
    out.push_back((1.0 / len) * p);
  }
  return out;
}

SourceAtoms fibonacci_atoms(std::size_t n,
                            const std::function<double(const Point&)>& density) {
  if (n == 0) throw std::invalid_argument("fibonacci atoms: n must be >= 1");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  SourceAtoms atoms;
  atoms.dim = 3;
  const double area = 4.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) /
                               static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    const Point p{r * std::cos(phi), r * std::sin(phi), z};
    const double rho = density(p);
    if (rho < 0.0)
      throw std::invalid_argument("fibonacci atoms: negative density");
    atoms.points.push_back(p);
    atoms.quad_weights.push_back(area);
    atoms.densities.push_back(rho);
    atoms.masses.push_back(rho * area);
  }
  normalize_masses(atoms.masses);
  return atoms;
}

double zonal_test_density(const Point& p) {
  const double z = p[2];
  const double y20 = 0.25 * std::sqrt(5.0 / std::numbers::pi) *
                     (3.0 * z * z - 1.0);
  return std::max(y20, 0.0) + 0.1;
}

}  // namespace sphere

RiemannianBarycenterResult riemannian_barycenter(
    const PointList& support, const std::vector<double>& weights,
    const Point& y0, double step, double tol, int max_iterations) {
  if (support.size() != weights.size())
    throw std::invalid_argument("riemannian barycenter: size mismatch");
  RiemannianBarycenterResult result;
  result.point = y0;
  for (int it = 0; it < max_iterations; ++it) {
    Point v{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < support.size(); ++q) {
      if (weights[q] == 0.0) continue;
      v = v + (-2.0 * weights[q]) * sphere::log_map(result.point, support[q]);
    }
    result.gradient_norm = norm(v);
    result.iterations = it;
    if (result.gradient_norm <= tol) {
      result.converged = true;
      return result;
    }
    result.point = sphere::exp_map(result.point, -step * v);
  }
  return result;
}

std::pair<PointList, BlueNoiseTrace> blue_noise_sphere(
    const SourceAtoms& atoms, const BlueNoiseConfig& cfg) {
  if (cfg.point_count == 0)
    throw std::invalid_argument("blue noise: point count must be >= 1");
  for (const Point& p : atoms.points)
    if (std::abs(norm(p) - 1.0) > 1e-12)
      throw std::invalid_argument("blue noise: atoms must be unit vectors");

  SolverConfig inner = cfg.inner;
  inner.cost_kind = CostKind::SqGeodesicSphere;

  const std::size_t n = cfg.point_count;
  PointList points = sphere::random_points(n, cfg.seed);
  TargetMeasure nu;
  nu.dim = 3;
  nu.weights.assign(n, 1.0 / static_cast<double>(n));

  BlueNoiseTrace trace;
  std::vector<double> psi(n, 0.0);

  for (int outer = 0; outer < cfg.max_outer_iterations; ++outer) {
    nu.points = points;
    solve_single(atoms, nu, inner, psi);

    PlanView plan(atoms, nu, DualPotential{psi, Gauge::Raw}, inner.epsilon,
                  CostKind::SqGeodesicSphere);

    PointList next(n);
    parallel_blocks(n, inner.workers, [&](int, std::size_t lo, std::size_t hi) {
      for (std::size_t j = lo; j < hi; ++j) {
        const std::vector<double> mu = plan.conditional_density(j);
        next[j] = riemannian_barycenter(atoms.points, mu, points[j],
                                        cfg.rb_step, cfg.rb_tol,
                                        cfg.rb_max_iterations)
                      .point;
      }
    });

    double move2 = 0.0, base2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      move2 += squared_distance(next[j], points[j]);
      base2 += dot(points[j], points[j]);
    }
    const double rel = std::sqrt(move2 / base2);
    points = std::move(next);
    trace.relative_movement.push_back(rel);
    trace.iterations = outer + 1;
    if (rel <= cfg.movement_tol) {
      trace.converged = true;
      break;
    }
  }
  return {points, trace};
}

}  // namespace rsot
