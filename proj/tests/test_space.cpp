#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "nitsche/geometry.hpp"
#include "nitsche/space.hpp"

using namespace nitsche;

namespace {

PairedField interpolate(const DofMap& dm, const std::array<ScalarField, 2>& f) {
  PairedField u(dm);
  for (int d = 0; d < dm.n_dofs(); ++d) u.coefficients[d] = f[index(dm.dof_side(d))](dm.mesh().vertex(dm.dof_vertex(d)));
  return u;
}

Point2 random_point_in(const std::array<Point2, 3>& p, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  double a = u(rng), b = u(rng);
  if (a + b > 1) {
    a = 1 - a;
    b = 1 - b;
  }
  return p[0] + a * (p[1] - p[0]) + b * (p[2] - p[0]);
}

}  // namespace

TEST_CASE("without an interface there is one space") {
  const auto mesh = uniform_mesh(6);
  const auto cls = classify_elements(mesh, circle_interface({0, 0}, 5.0));
  const auto dm = build_dofmap(mesh, cls);
  CHECK(dm.n_dofs() == mesh.num_vertices());
  CHECK(dm.n_side_dofs(Side::Two) == 0);
  CHECK(dm.dirichlet_dofs().size() == 24u);
}

TEST_CASE("DOF counts follow the covered vertices") {
  const auto mesh = uniform_mesh(4);
  for (double c : {-0.4, -0.1, 0.3}) {
    const auto cls = classify_elements(mesh, line_interface(1, 0, c));
    const auto dm = build_dofmap(mesh, cls);
    // independent count: vertices of triangles covering each side
    int expected = 0;
    for (Side s : kSides) {
      std::set<int> verts;
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        if (cls.touches(t, s)) verts.insert(mesh.triangle(t).begin(), mesh.triangle(t).end());
      }
      CHECK(dm.n_side_dofs(s) == static_cast<int>(verts.size()));
      expected += static_cast<int>(verts.size());
    }
    CHECK(dm.n_dofs() == expected);
  }
  // x = 0.4 crosses the column 0 < x < 0.5: side One has 4 columns of vertices, side Two 3
  const auto cls = classify_elements(mesh, line_interface(1, 0, -0.4));
  const auto dm = build_dofmap(mesh, cls);
  CHECK(dm.n_side_dofs(Side::One) == 20);
  CHECK(dm.n_side_dofs(Side::Two) == 15);
  for (int t : cls.cut_elements) {
    for (int v : mesh.triangle(t)) {
      CHECK(dm.node_dof(Side::One, v) >= 0);
      CHECK(dm.node_dof(Side::Two, v) >= 0);
    }
  }
}

TEST_CASE("numbering is side One first, each in vertex order") {
  const auto mesh = uniform_mesh(16);
  const auto cls = classify_elements(mesh, make_interface("circle"));
  const auto dm = build_dofmap(mesh, cls);
  for (Side s : kSides) {
    int prev = -1;
    for (int d = dm.side_offset(s); d < dm.side_offset(s) + dm.n_side_dofs(s); ++d) {
      CHECK(dm.dof_side(d) == s);
      CHECK(dm.dof_vertex(d) > prev);
      CHECK(dm.node_dof(s, dm.dof_vertex(d)) == d);
      prev = dm.dof_vertex(d);
    }
  }
  for (int d : dm.dirichlet_dofs()) CHECK(mesh.is_boundary_vertex(dm.dof_vertex(d)));
  const auto again = build_dofmap(mesh, classify_elements(mesh, make_interface("circle")));
  CHECK(again.n_dofs() == dm.n_dofs());
  for (Side s : kSides) CHECK(again.node_dofs(s) == dm.node_dofs(s));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (Side s : kSides) CHECK(dm.has_side(t, s) == cls.touches(t, s));
  }
}

TEST_CASE("evaluation of paired fields") {
  const auto mesh = uniform_mesh(16);
  const auto cls = classify_elements(mesh, make_interface("circle"));
  const auto dm = build_dofmap(mesh, cls);
  std::mt19937 rng(9);

  PairedField ones(dm, std::vector<double>(dm.n_dofs(), 1.0));
  const PairedField affine = interpolate(dm, {[](Point2 p) { return 0.5 + p.x + 2 * p.y; },
                                              [](Point2 p) { return -3.0 * p.x + 0.25 * p.y - 1; }});
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (Side s : kSides) {
      if (!dm.has_side(t, s)) {
        CHECK_THROWS_AS(ones.eval(t, s, mesh.vertex(mesh.triangle(t)[0])), std::invalid_argument);
        continue;
      }
      const Point2 x = random_point_in(mesh.triangle_points(t), rng);
      const auto v = ones.eval(t, s, x);
      CHECK(v.value == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(v.grad.x) < 1e-12);
      CHECK(std::abs(v.grad.y) < 1e-12);
      const auto a = affine.eval(t, s, x);
      if (s == Side::One) {
        CHECK(std::abs(a.value - (0.5 + x.x + 2 * x.y)) < 1e-13);
        CHECK(a.grad.x == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a.grad.y == doctest::Approx(2.0).epsilon(1e-12));
      } else {
        CHECK(std::abs(a.value - (-3.0 * x.x + 0.25 * x.y - 1)) < 1e-13);
        CHECK(a.grad.x == doctest::Approx(-3.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("values agree across shared edges") {
  const auto mesh = uniform_mesh(8);
  const auto cls = classify_elements(mesh, make_interface("circle"));
  const auto dm = build_dofmap(mesh, cls);
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> u(-1, 1);
  PairedField f(dm);
  for (auto& c : f.coefficients) c = u(rng);
  for (const auto& e : mesh.edges()) {
    if (e.is_boundary()) continue;
    const Point2 m = midpoint(mesh.vertex(e.v[0]), mesh.vertex(e.v[1]));
    for (Side s : kSides) {
      if (!dm.has_side(e.triangles[0], s) || !dm.has_side(e.triangles[1], s)) continue;
      CHECK(f.eval(e.triangles[0], s, m).value == doctest::Approx(f.eval(e.triangles[1], s, m).value).epsilon(1e-14));
    }
  }
}

TEST_CASE("barycentric coordinates") {
  const std::array<Point2, 3> p{Point2{0.2, 0.1}, Point2{1.0, 0.3}, Point2{0.4, 0.9}};
  const auto g = barycentric_gradients(p);
  for (int k = 0; k < 3; ++k) {
    const auto lam = barycentric(p, p[k]);
    for (int j = 0; j < 3; ++j) CHECK(lam[j] == doctest::Approx(j == k ? 1.0 : 0.0).scale(1.0));
  }
  CHECK((g[0] + g[1] + g[2]).x == doctest::Approx(0.0).scale(1.0));
  CHECK((g[0] + g[1] + g[2]).y == doctest::Approx(0.0).scale(1.0));
  for (int k = 0; k < 3; ++k) {
    CHECK(dot(g[k], p[(k + 1) % 3] - p[(k + 2) % 3]) == doctest::Approx(0.0).scale(1.0));
    CHECK(dot(g[k], p[k] - p[(k + 1) % 3]) == doctest::Approx(1.0));
  }
}
