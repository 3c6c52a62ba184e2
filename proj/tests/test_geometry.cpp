#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "rsot/mesh.hpp"
#include "rsot/quadrature.hpp"
#include "rsot/spatial_index.hpp"
#include "test_util.hpp"

using namespace rsot;
using namespace rsot::testing;

namespace {

SimplicialMesh mesh_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_mesh(in, "<inline>");
}

}  // namespace

TEST_CASE("mesh: unit square file parses to two triangles") {
  const SimplicialMesh mesh = mesh_from_string(
      "smesh 1 2\n"
      "4 2\n"
      "0 0\n1 0\n1 1\n0 1\n"
      "0 1 2\n0 2 3\n");
  CHECK(mesh.dim == 2);
  CHECK(mesh.cell_count() == 2);
  CHECK(mesh.total_volume() == doctest::Approx(1.0));
}

TEST_CASE("mesh: out-of-range vertex index is rejected") {
  CHECK_THROWS_WITH_AS(mesh_from_string("smesh 1 2\n"
                                        "4 2\n"
                                        "0 0\n1 0\n1 1\n0 1\n"
                                        "0 1 2\n0 2 9\n"),
                       doctest::Contains("references vertex 9 of 4"),
                       std::runtime_error);
}

TEST_CASE("mesh: degenerate cell is rejected") {
  CHECK_THROWS_WITH_AS(mesh_from_string("smesh 1 2\n"
                                        "3 1\n"
                                        "0 0\n1 0\n2 0\n"
                                        "0 1 2\n"),
                       doctest::Contains("zero volume"), std::runtime_error);
}

TEST_CASE("mesh: malformed header is a parse error") {
  CHECK_THROWS_AS(mesh_from_string("mesh 2 2\n"), std::runtime_error);
}

TEST_CASE("mesh: 1D uniform partition of [0,1]") {
  const SimplicialMesh mesh = mesh_from_string(
      "smesh 1 1\n"
      "5 4\n"
      "0\n0.25\n0.5\n0.75\n1\n"
      "0 1\n1 2\n2 3\n3 4\n");
  CHECK(mesh.cell_count() == 4);
  CHECK(mesh.total_volume() == doctest::Approx(1.0));
}

TEST_CASE("mesh: write/load round trip") {
  const SimplicialMesh mesh = make_unit_square_mesh(3);
  const std::string path = "roundtrip.smesh";
  write_mesh(mesh, path);
  const SimplicialMesh back = load_mesh(path);
  CHECK(back.cell_count() == mesh.cell_count());
  CHECK(back.total_volume() == doctest::Approx(mesh.total_volume()));
}

TEST_CASE("quadrature: rules are positive and sum to reference volume") {
  const double ref_vol[] = {0.0, 1.0, 0.5, 1.0 / 6.0};
  for (int dim = 1; dim <= 3; ++dim) {
    for (int order = 1; order <= 3; ++order) {
      double sum = 0.0;
      for (const auto& qp : reference_rule(dim, order)) {
        CHECK(qp.weight > 0.0);
        sum += qp.weight;
      }
      CHECK(sum == doctest::Approx(ref_vol[dim]).epsilon(1e-14));
    }
  }
  CHECK(points_per_cell(2, 3) == 4);
  CHECK(points_per_cell(3, 3) == 5);
}

TEST_CASE("quadrature: order-2 rules integrate degree-2 monomials exactly") {
  // Closed-form reference-simplex integrals of x^a y^b z^c.
  const auto integrate = [](int dim, int order, auto f) {
    double s = 0.0;
    for (const auto& qp : reference_rule(dim, order))
      s += qp.weight * f(qp.ref);
    return s;
  };
  // 1D: int_0^1 x^k = 1/(k+1)
  CHECK(integrate(1, 2, [](const Point& p) { return p[0] * p[0]; }) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // triangle
  CHECK(integrate(2, 2, [](const Point& p) { return p[0]; }) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(integrate(2, 2, [](const Point& p) { return p[0] * p[0]; }) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(integrate(2, 2, [](const Point& p) { return p[0] * p[1]; }) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  // tetrahedron
  CHECK(integrate(3, 2, [](const Point& p) { return p[0]; }) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(integrate(3, 2, [](const Point& p) { return p[0] * p[0]; }) ==
        doctest::Approx(1.0 / 60.0).epsilon(1e-14));
  CHECK(integrate(3, 2, [](const Point& p) { return p[0] * p[1]; }) ==
        doctest::Approx(1.0 / 120.0).epsilon(1e-14));
  // order-3 rules also reproduce degree-2 moments
  CHECK(integrate(2, 3, [](const Point& p) { return p[0] * p[1]; }) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(integrate(3, 3, [](const Point& p) { return p[0] * p[0]; }) ==
        doctest::Approx(1.0 / 60.0).epsilon(1e-14));
}

TEST_CASE("atomize: single unit right triangle, constant density, r=1") {
  SimplicialMesh mesh;
  mesh.dim = 2;
  mesh.vertices = {make_point(0, 0), make_point(1, 0), make_point(0, 1)};
  mesh.cells = {{0, 1, 2, -1}};
  DensityField rho{{1.0, 1.0, 1.0}};
  const SourceAtoms atoms = atomize(mesh, rho, QuadratureSpec{1});
  REQUIRE(atoms.size() == 1);
  CHECK(atoms.points[0][0] == doctest::Approx(1.0 / 3.0));
  CHECK(atoms.points[0][1] == doctest::Approx(1.0 / 3.0));
  // pre-normalization mass = rho * w = 1 * area = 0.5
  CHECK(atoms.densities[0] * atoms.quad_weights[0] == doctest::Approx(0.5));
  CHECK(atoms.masses[0] == doctest::Approx(1.0));
}

TEST_CASE("atomize: 1D two segments, constant density, r=2 gives 4 equal atoms") {
  const SourceAtoms atoms = uniform_interval_atoms(2, 2);
  REQUIRE(atoms.size() == 4);
  for (double m : atoms.masses) CHECK(m == doctest::Approx(0.25));
}

TEST_CASE("atomize: zero density errors") {
  SimplicialMesh mesh;
  mesh.dim = 2;
  mesh.vertices = {make_point(0, 0), make_point(1, 0), make_point(0, 1)};
  mesh.cells = {{0, 1, 2, -1}};
  DensityField rho{{0.0, 0.0, 0.0}};
  CHECK_THROWS_WITH_AS(atomize(mesh, rho, QuadratureSpec{1}),
                       doctest::Contains("zero total mass"),
                       std::runtime_error);
}

TEST_CASE("atomize: mass conservation and P1 integral agreement") {
  // Linear density rho = 1 + 2x + y on a structured square mesh. The P1
  // integral per cell is vol * mean of vertex values, exact for linear rho.
  const SimplicialMesh mesh = make_unit_square_mesh(4);
  DensityField rho;
  for (const Point& v : mesh.vertices)
    rho.values.push_back(1.0 + 2.0 * v[0] + v[1]);

  double exact = 0.0;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    double mean = 0.0;
    for (int i = 0; i < 3; ++i)
      mean += rho.values[static_cast<std::size_t>(mesh.cells[k][static_cast<std::size_t>(i)])] / 3.0;
    exact += mesh.cell_volume(k) * mean;
  }

  for (int order : {2, 3}) {
    const SourceAtoms atoms = atomize(mesh, rho, QuadratureSpec{order});
    double pre = 0.0, post = 0.0;
    for (std::size_t q = 0; q < atoms.size(); ++q) {
      pre += atoms.densities[q] * atoms.quad_weights[q];
      post += atoms.masses[q];
    }
    CHECK(pre == doctest::Approx(exact).epsilon(1e-13));
    CHECK(std::abs(post - 1.0) <= 1e-14);
  }
  // r=1 is exact for constant density only.
  DensityField flat;
  flat.values.assign(mesh.vertex_count(), 2.0);
  const SourceAtoms atoms1 = atomize(mesh, flat, QuadratureSpec{1});
  double pre = 0.0;
  for (std::size_t q = 0; q < atoms1.size(); ++q)
    pre += atoms1.densities[q] * atoms1.quad_weights[q];
  CHECK(pre == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("spatial index: rejects empty input, handles single point") {
  CHECK_THROWS_AS(build_index({}), std::invalid_argument);
  const SpatialIndex index(PointList{make_point(3.0, 1.0)});
  CHECK(index.nearest(make_point(-100.0)) == 0);
  CHECK(index.nearest(make_point(100.0)) == 0);
}

TEST_CASE("spatial index: three collinear points") {
  const PointList pts = {make_point(0.0), make_point(1.0), make_point(3.0)};
  const SpatialIndex index(pts);
  CHECK(index.size() == 3);
  CHECK(index.nearest(make_point(0.9)) == 1);
}

TEST_CASE("range query: line example, cutoff 1 under half squared cost") {
  const PointList pts = {make_point(0.0), make_point(1.0), make_point(3.0)};
  const SpatialIndex index(pts);
  const auto hits =
      range_query(index, make_point(0.0), 1.0, CostKind::SqEuclidean);
  CHECK(hits == std::vector<std::size_t>{0, 1});

  CHECK(range_query(index, make_point(0.0), 0.0, CostKind::SqEuclidean).empty());

  // strict inequality: distance 0 stays inside any positive cutoff
  const auto self =
      range_query(index, make_point(1.0), 1e-12, CostKind::SqEuclidean);
  CHECK(self == std::vector<std::size_t>{1});
}

TEST_CASE("range query: geodesic cost has no ball conversion") {
  const SpatialIndex index(PointList{make_point(1.0, 0.0, 0.0)});
  CHECK_THROWS_AS(
      range_query(index, make_point(0.0, 1.0, 0.0), 1.0,
                  CostKind::SqGeodesicSphere),
      std::invalid_argument);
}

TEST_CASE("range query matches brute force on random instances") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int dim = 1; dim <= 3; ++dim) {
    PointList pts;
    for (int i = 0; i < 1000; ++i) {
      Point p{0.0, 0.0, 0.0};
      for (int c = 0; c < dim; ++c) p[static_cast<std::size_t>(c)] = unit(rng);
      pts.push_back(p);
    }
    const SpatialIndex index(pts);
    for (int trial = 0; trial < 50; ++trial) {
      Point center{0.0, 0.0, 0.0};
      for (int c = 0; c < dim; ++c)
        center[static_cast<std::size_t>(c)] = unit(rng);
      const double cutoff = 0.25 * unit(rng);
      const double radius = std::sqrt(2.0 * cutoff);
      const auto got =
          range_query(index, center, cutoff, CostKind::SqEuclidean);
      const auto want = brute_force_ball(pts, center, radius);
      CHECK(got == want);
    }
  }
}

TEST_CASE("nearest matches brute force") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointList pts;
  for (int i = 0; i < 500; ++i)
    pts.push_back(make_point(unit(rng), unit(rng)));
  const SpatialIndex index(pts);
  for (int trial = 0; trial < 100; ++trial) {
    const Point c = make_point(unit(rng), unit(rng));
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (squared_distance(pts[i], c) < squared_distance(pts[best], c))
        best = i;
    CHECK(index.nearest(c) == best);
  }
}

TEST_CASE("covering cost: worked example and degenerate cases") {
  SourceAtoms atoms;
  atoms.dim = 1;
  atoms.points = {make_point(0.0), make_point(0.5), make_point(1.0)};
  atoms.quad_weights = {1.0, 1.0, 1.0};
  atoms.densities = {1.0, 1.0, 1.0};
  atoms.masses = {1.0 / 3, 1.0 / 3, 1.0 / 3};

  TargetMeasure target;
  target.dim = 1;
  target.points = {make_point(0.0), make_point(1.0)};
  target.weights = {0.5, 0.5};

  CHECK(covering_cost(atoms, target, CostKind::SqEuclidean) ==
        doctest::Approx(0.125));

  // targets contain every atom location -> zero covering cost
  TargetMeasure superset;
  superset.dim = 1;
  superset.points = atoms.points;
  superset.weights = {0.25, 0.5, 0.25};
  CHECK(covering_cost(atoms, superset, CostKind::SqEuclidean) == 0.0);

  SourceAtoms one;
  one.dim = 1;
  one.points = {make_point(0.3)};
  one.quad_weights = {1.0};
  one.densities = {1.0};
  one.masses = {1.0};
  TargetMeasure same;
  same.dim = 1;
  same.points = {make_point(0.3)};
  same.weights = {1.0};
  CHECK(covering_cost(one, same, CostKind::SqEuclidean) == 0.0);
}
