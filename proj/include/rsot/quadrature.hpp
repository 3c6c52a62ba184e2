#pragma once

#include <vector>

#include "rsot/measures.hpp"
#include "rsot/mesh.hpp"

namespace rsot {

/// Fixed symmetric simplex quadrature, order r in {1,2,3}.
///  - 1D: Gauss-Legendre with r points.
///  - triangle: r=1 centroid, r=2 three-point (degree 2),
///    r=3 four-point positive symmetric rule (degree 2).
///  - tetrahedron: r=1 centroid, r=2 four-point (degree 2),
///    r=3 five-point positive symmetric rule (degree 2).
/// All weights are positive and sum to the reference-simplex volume.
struct QuadratureSpec {
  int order = 2;
};

/// One rule point in reference coordinates with its reference weight.
struct QuadraturePoint {
  Point ref;
  double weight;
};

/// Rule table for the reference simplex of the given dimension.
std::vector<QuadraturePoint> reference_rule(int dim, int order);

/// Number of quadrature points per cell for (dim, order).
std::size_t points_per_cell(int dim, int order);

/// Maps the density and mesh onto quadrature atoms
/// (x_q, w_q, rho(x_q), m_q) with masses normalized to total 1.
/// Throws if the total mass (P1 integral of the density) vanishes.
SourceAtoms atomize(const SimplicialMesh& mesh, const DensityField& density,
                    const QuadratureSpec& quad);

/// Atoms from a weighted point cloud: weights become masses (normalized),
/// quad weights carry the raw weights, densities are set to one.
SourceAtoms atoms_from_point_cloud(int dim, const PointList& points,
                                   const std::vector<double>& weights);

}  // namespace rsot
