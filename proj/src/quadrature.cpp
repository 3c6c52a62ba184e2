#include "rsot/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace rsot {

namespace {

constexpr double kRefVolume[4] = {0.0, 1.0, 0.5, 1.0 / 6.0};

std::vector<QuadraturePoint> rule_1d(int order) {
  switch (order) {
    case 1:
      return {{make_point(0.5), 1.0}};
    case 2: {
      const double off = 0.5 / std::sqrt(3.0);
      return {{make_point(0.5 - off), 0.5}, {make_point(0.5 + off), 0.5}};
    }
    case 3: {
      const double off = 0.5 * std::sqrt(3.0 / 5.0);
      return {{make_point(0.5 - off), 5.0 / 18.0},
              {make_point(0.5), 4.0 / 9.0},
              {make_point(0.5 + off), 5.0 / 18.0}};
    }
    default:
      throw std::invalid_argument("quadrature order must be 1, 2 or 3");
  }
}

std::vector<QuadraturePoint> rule_triangle(int order) {
  switch (order) {
    case 1:
      return {{make_point(1.0 / 3.0, 1.0 / 3.0), 0.5}};
    case 2:
      return {{make_point(1.0 / 6.0, 1.0 / 6.0), 1.0 / 6.0},
              {make_point(2.0 / 3.0, 1.0 / 6.0), 1.0 / 6.0},
              {make_point(1.0 / 6.0, 2.0 / 3.0), 1.0 / 6.0}};
    case 3: {
      // Centroid plus one symmetric orbit at a = 1/10; weights solve the
      // degree-2 moment equations and stay positive.
      const double w_orbit = 25.0 / 294.0;
      const double w_centroid = 12.0 / 49.0;
      return {{make_point(1.0 / 3.0, 1.0 / 3.0), w_centroid},
              {make_point(0.1, 0.1), w_orbit},
              {make_point(0.8, 0.1), w_orbit},
              {make_point(0.1, 0.8), w_orbit}};
    }
    default:
      throw std::invalid_argument("quadrature order must be 1, 2 or 3");
  }
}

std::vector<QuadraturePoint> rule_tetrahedron(int order) {
  switch (order) {
    case 1:
      return {{make_point(0.25, 0.25, 0.25), 1.0 / 6.0}};
    case 2: {
      const double a = (5.0 - std::sqrt(5.0)) / 20.0;
      const double b = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
      const double w = 1.0 / 24.0;
      return {{make_point(a, a, a), w},
              {make_point(b, a, a), w},
              {make_point(a, b, a), w},
              {make_point(a, a, b), w}};
    }
    case 3: {
      const double w_orbit = 5.0 / 216.0;
      const double w_centroid = 2.0 / 27.0;
      return {{make_point(0.25, 0.25, 0.25), w_centroid},
              {make_point(0.1, 0.1, 0.1), w_orbit},
              {make_point(0.7, 0.1, 0.1), w_orbit},
              {make_point(0.1, 0.7, 0.1), w_orbit},
              {make_point(0.1, 0.1, 0.7), w_orbit}};
    }
    default:
      throw std::invalid_argument("quadrature order must be 1, 2 or 3");
  }
}

}  // namespace

std::vector<QuadraturePoint> reference_rule(int dim, int order) {
  switch (dim) {
    case 1:
      return rule_1d(order);
    case 2:
      return rule_triangle(order);
    case 3:
      return rule_tetrahedron(order);
    default:
      throw std::invalid_argument("quadrature dimension must be 1, 2 or 3");
  }
}

std::size_t points_per_cell(int dim, int order) {
  return reference_rule(dim, order).size();
}

SourceAtoms atomize(const SimplicialMesh& mesh, const DensityField& density,
                    const QuadratureSpec& quad) {
  if (density.values.size() != mesh.vertex_count())
    throw std::invalid_argument("atomize: density size != vertex count");
  for (double v : density.values)
    if (v < 0.0) throw std::invalid_argument("atomize: negative density value");

  const auto rule = reference_rule(mesh.dim, quad.order);
  SourceAtoms atoms;
  atoms.dim = mesh.dim;
  atoms.points.reserve(mesh.cell_count() * rule.size());

  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const auto& cell = mesh.cells[k];
    const Point& v0 = mesh.vertices[static_cast<std::size_t>(cell[0])];
    const double scale =
        mesh.cell_volume(k) / kRefVolume[static_cast<std::size_t>(mesh.dim)];
    for (const auto& qp : rule) {
      Point x = v0;
      double lambda0 = 1.0;
      double rho = 0.0;
      for (int i = 0; i < mesh.dim; ++i) {
        const double xi = qp.ref[static_cast<std::size_t>(i)];
        const Point& vi = mesh.vertices[static_cast<std::size_t>(cell[i + 1])];
        x = x + xi * (vi - v0);
        rho += xi * density.values[static_cast<std::size_t>(cell[i + 1])];
        lambda0 -= xi;
      }
      rho += lambda0 * density.values[static_cast<std::size_t>(cell[0])];
      atoms.points.push_back(x);
      atoms.quad_weights.push_back(qp.weight * scale);
      atoms.densities.push_back(rho);
      atoms.masses.push_back(rho * qp.weight * scale);
    }
  }
  normalize_masses(atoms.masses);
  return atoms;
}

SourceAtoms atoms_from_point_cloud(int dim, const PointList& points,
                                   const std::vector<double>& weights) {
  if (points.empty()) throw std::invalid_argument("empty point cloud");
  if (points.size() != weights.size())
    throw std::invalid_argument("point/weight size mismatch");
  SourceAtoms atoms;
  atoms.dim = dim;
  atoms.points = points;
  atoms.quad_weights = weights;
  atoms.densities.assign(points.size(), 1.0);
  atoms.masses = weights;
  normalize_masses(atoms.masses);
  return atoms;
}

}  // namespace rsot
