#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsot/point.hpp"

namespace rsot {

/// Conforming simplicial mesh in dimension 1, 2 or 3. Cells are
/// (d+1)-tuples of 0-based vertex indices; unused slots stay at -1.
struct SimplicialMesh {
  int dim = 0;
  PointList vertices;
  std::vector<std::array<int, 4>> cells;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t cell_count() const { return cells.size(); }

  /// Signed-volume magnitude of cell k (length / area / volume).
  double cell_volume(std::size_t k) const;
  double total_volume() const;
};

/// Per-vertex nonnegative values interpreted as a piecewise-linear (P1)
/// density over the mesh.
struct DensityField {
  std::vector<double> values;
};

/// Validates index ranges and cell non-degeneracy; throws on violation.
void validate_mesh(const SimplicialMesh& mesh);

/// Reads the plain-text "smesh v1" format:
///   line 1: `smesh 1 <d>`
///   line 2: `<nv> <nc>`
///   nv lines of d floats, then nc lines of d+1 0-based integers.
SimplicialMesh load_mesh(const std::string& path);
SimplicialMesh read_mesh(std::istream& in, const std::string& name);
void write_mesh(const SimplicialMesh& mesh, const std::string& path);

/// Reads a density CSV (one value per vertex, same order as the mesh file).
DensityField load_density(const std::string& path, const SimplicialMesh& mesh);

/// Uniform partition of [a,b] into n segments.
SimplicialMesh make_interval_mesh(double a, double b, int n);

/// Structured triangulation of [0,1]^2, 2*n*n triangles.
SimplicialMesh make_unit_square_mesh(int n);

}  // namespace rsot
