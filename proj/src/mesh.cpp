#include "rsot/mesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsot {

namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

}  // namespace

double SimplicialMesh::cell_volume(std::size_t k) const {
  const auto& c = cells[k];
  const Point& v0 = vertices[static_cast<std::size_t>(c[0])];
  if (dim == 1) {
    return std::abs(vertices[static_cast<std::size_t>(c[1])][0] - v0[0]);
  }
  if (dim == 2) {
    const Point e1 = vertices[static_cast<std::size_t>(c[1])] - v0;
    const Point e2 = vertices[static_cast<std::size_t>(c[2])] - v0;
    return 0.5 * std::abs(det2(e1[0], e2[0], e1[1], e2[1]));
  }
  const Point e1 = vertices[static_cast<std::size_t>(c[1])] - v0;
  const Point e2 = vertices[static_cast<std::size_t>(c[2])] - v0;
  const Point e3 = vertices[static_cast<std::size_t>(c[3])] - v0;
  const double det = e1[0] * det2(e2[1], e3[1], e2[2], e3[2]) -
                     e2[0] * det2(e1[1], e3[1], e1[2], e3[2]) +
                     e3[0] * det2(e1[1], e2[1], e1[2], e2[2]);
  return std::abs(det) / 6.0;
}

double SimplicialMesh::total_volume() const {
  double v = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) v += cell_volume(k);
  return v;
}

void validate_mesh(const SimplicialMesh& mesh) {
  if (mesh.dim < 1 || mesh.dim > 3)
    throw std::runtime_error("mesh validation: dimension must be 1, 2 or 3");
  if (mesh.vertices.empty() || mesh.cells.empty())
    throw std::runtime_error("mesh validation: empty vertex or cell list");
  const int nv = static_cast<int>(mesh.vertices.size());
  for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
    for (int i = 0; i <= mesh.dim; ++i) {
      const int idx = mesh.cells[k][static_cast<std::size_t>(i)];
      if (idx < 0 || idx >= nv) {
        std::ostringstream msg;
        msg << "mesh validation: cell " << k << " references vertex " << idx
            << " of " << nv;
        throw std::runtime_error(msg.str());
      }
    }
    if (!(mesh.cell_volume(k) > 0.0)) {
      std::ostringstream msg;
      msg << "mesh validation: cell " << k << " has zero volume";
      throw std::runtime_error(msg.str());
    }
  }
}

SimplicialMesh read_mesh(std::istream& in, const std::string& name) {
  std::string magic;
  int version = 0, dim = 0;
  if (!(in >> magic >> version >> dim) || magic != "smesh" || version != 1)
    throw std::runtime_error("mesh parse: " + name +
                             ": expected header `smesh 1 <d>`");
  std::size_t nv = 0, nc = 0;
  if (!(in >> nv >> nc))
    throw std::runtime_error("mesh parse: " + name + ": bad count line");
  SimplicialMesh mesh;
  mesh.dim = dim;
  mesh.vertices.resize(nv, Point{0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < nv; ++i)
    for (int c = 0; c < dim; ++c)
      if (!(in >> mesh.vertices[i][static_cast<std::size_t>(c)]))
        throw std::runtime_error("mesh parse: " + name + ": bad vertex line");
  mesh.cells.resize(nc, {-1, -1, -1, -1});
  for (std::size_t k = 0; k < nc; ++k)
    for (int c = 0; c <= dim; ++c)
      if (!(in >> mesh.cells[k][static_cast<std::size_t>(c)]))
        throw std::runtime_error("mesh parse: " + name + ": bad cell line");
  validate_mesh(mesh);
  return mesh;
}

SimplicialMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return read_mesh(in, path);
}

void write_mesh(const SimplicialMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out.precision(17);
  out << "smesh 1 " << mesh.dim << "\n";
  out << mesh.vertices.size() << " " << mesh.cells.size() << "\n";
  for (const auto& v : mesh.vertices) {
    for (int c = 0; c < mesh.dim; ++c)
      out << (c ? " " : "") << v[static_cast<std::size_t>(c)];
    out << "\n";
  }
  for (const auto& cell : mesh.cells) {
    for (int c = 0; c <= mesh.dim; ++c)
      out << (c ? " " : "") << cell[static_cast<std::size_t>(c)];
    out << "\n";
  }
}

DensityField load_density(const std::string& path, const SimplicialMesh& mesh) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open density file: " + path);
  DensityField rho;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rho.values.push_back(std::stod(line));
  }
  if (rho.values.size() != mesh.vertex_count())
    throw std::runtime_error("density file " + path + ": expected " +
                             std::to_string(mesh.vertex_count()) +
                             " values, got " + std::to_string(rho.values.size()));
  return rho;
}

SimplicialMesh make_interval_mesh(double a, double b, int n) {
  SimplicialMesh mesh;
  mesh.dim = 1;
  const double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) mesh.vertices.push_back(make_point(a + i * h));
  for (int i = 0; i < n; ++i) mesh.cells.push_back({i, i + 1, -1, -1});
  return mesh;
}

SimplicialMesh make_unit_square_mesh(int n) {
  SimplicialMesh mesh;
  mesh.dim = 2;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back(make_point(i * h, j * h));
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), -1});
      mesh.cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1), -1});
    }
  }
  return mesh;
}

}  // namespace rsot
