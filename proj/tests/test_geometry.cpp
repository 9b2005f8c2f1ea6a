#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "nitsche/errors.hpp"
#include "nitsche/geometry.hpp"
#include "nitsche/mesh.hpp"

using namespace nitsche;

namespace {

ScalarField constant(double c) {
  return [c](Point2) { return c; };
}

Mesh unit_triangle() { return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

Interface negated(const Interface& f) {
  Interface g = f;
  g.name = f.name + "-neg";
  g.phi = [f](Point2 p) { return -f.phi(p); };
  if (f.grad_phi) g.grad_phi = [f](Point2 p) { return -f.grad_phi(p); };
  return g;
}

double integrate(const QuadRule& rule, const ScalarField& f) {
  double s = 0;
  for (const auto& q : rule) s += q.w * f(q.x);
  return s;
}

void check_cut_invariants(const Mesh& mesh, const CutGeometry& geo, const Interface& iface) {
  for (const auto& c : geo.cuts) {
    const double area = element_geometry(mesh, c.element).area;
    CHECK(std::abs(c.area[0] + c.area[1] - area) <= 1e-12 * area);
    CHECK(c.kappa1 + c.kappa2 == 1.0);
    CHECK(c.kappa1 >= 0.0);
    CHECK(c.kappa1 <= 1.0);
    CHECK(c.gamma > 0.0);
    CHECK(std::abs(norm(c.normal) - 1.0) < 1e-14);
    CHECK(dot(c.normal, iface.gradient(midpoint(c.entry, c.exit))) > 0.0);
    CHECK(std::abs(iface.phi(c.entry)) <= 1e-10);
    CHECK(std::abs(iface.phi(c.exit)) <= 1e-10);
    CHECK(polygon_area(c.poly[0].points()) == doctest::Approx(c.area[0]).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("circle classification matches the vertex radii") {
  const auto mesh = uniform_mesh(16);
  const auto iface = make_interface("circle");
  const auto cls = classify_elements(mesh, iface);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    int inside = 0;
    for (auto p : mesh.triangle_points(t)) inside += norm(p) < 0.5;
    if (inside == 3) CHECK(cls.kind[t] == ElementKind::Interior1);
    if (inside == 0) CHECK(cls.kind[t] != ElementKind::Interior1);
    if (inside == 1 || inside == 2) CHECK(cls.is_cut(t));
  }
}

TEST_CASE("covers and strict lists") {
  for (const char* name : {"circle", "flower5"}) {
    const auto mesh = uniform_mesh(128);
    const auto iface = make_interface(name);
    const auto cls = classify_elements(mesh, iface);
    for (Side s : kSides) {
      const auto& cov = cls.covers[index(s)];
      std::set<int> a(cov.begin(), cov.end());
      CHECK(a.size() == cls.strict[index(s)].size() + cls.cut_elements.size());
      for (int t : cls.cut_elements) CHECK(a.count(t) == 1);
    }
    std::set<int> both;
    std::set_intersection(cls.covers[0].begin(), cls.covers[0].end(), cls.covers[1].begin(), cls.covers[1].end(),
                          std::inserter(both, both.end()));
    CHECK(both == std::set<int>(cls.cut_elements.begin(), cls.cut_elements.end()));
    CHECK(cls.covers[0].size() + cls.covers[1].size() - cls.cut_elements.size() ==
          static_cast<std::size_t>(mesh.num_triangles()));
  }
}

TEST_CASE("straight line through the 4x4 grid") {
  const auto mesh = uniform_mesh(4);
  const auto cls = classify_elements(mesh, line_interface(1, 0, -0.4));
  CHECK(cls.cut_elements.size() == 8);
  CHECK(cls.strict[0].size() == 16);
  CHECK(cls.strict[1].size() == 8);
  for (int t : cls.cut_elements) {
    double lo = 1, hi = -1;
    for (auto p : mesh.triangle_points(t)) {
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
    CHECK(lo == 0.0);
    CHECK(hi == 0.5);
  }
}

TEST_CASE("a line along grid lines snaps and is carried by mesh edges") {
  const auto mesh = uniform_mesh(4);
  const auto iface = line_interface(1, 0, -0.5);
  const auto geo = build_cut_geometry(mesh, iface, constant(1), constant(1));
  CHECK(geo.classification.cut_elements.empty());
  double length = 0;
  for (const auto& s : geo.segments) {
    length += s.length;
    CHECK(s.a.x == doctest::Approx(0.5));
    CHECK(s.b.x == doctest::Approx(0.5));
    CHECK(s.normal.x == doctest::Approx(1.0));
    CHECK(geo.classification.kind[s.element[0]] == ElementKind::Interior1);
    CHECK(geo.classification.kind[s.element[1]] == ElementKind::Interior2);
  }
  CHECK(length == doctest::Approx(2.0));
  CHECK(geo.classification.strict[0].size() == 24);
}

TEST_CASE("a line through rounded bisection vertices") {
  // midpoints of a 14x14 grid land one ulp off x = 0.5
  std::mt19937 rng(101);
  const auto line = line_interface(1, 0, -0.5);
  for (int trial = 0; trial < 3; ++trial) {
    Mesh m = uniform_mesh(6 + 4 * trial);
    for (int round = 0; round < 4; ++round) {
      std::vector<int> marked;
      std::uniform_int_distribution<int> pick(0, m.num_triangles() - 1);
      for (int k = 0; k < m.num_triangles() / 5 + 1; ++k) marked.push_back(pick(rng));
      m = bisect(m, marked);
    }
    CAPTURE(trial);
    CHECK(audit_interface(m, line).ok);
  }
}

TEST_CASE("snapped vertex signs") {
  const auto mesh = uniform_mesh(4);
  const auto signs = snapped_vertex_signs(mesh, line_interface(1, 0, -0.5));
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double x = mesh.vertex(v).x;
    if (x < 0.5) CHECK(signs[v] == -1);
    if (x > 0.5) CHECK(signs[v] == 1);
  }
}

TEST_CASE("audit flags small closed curves and double crossings") {
  const auto mesh = uniform_mesh(4);
  // a small circle crossing the edge y = -0.5, 0 < x < 0.5 twice
  const auto bump = circle_interface({0.25, -0.55}, 0.1);
  const auto rep = audit_interface(mesh, bump);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.elements.empty());
  REQUIRE_FALSE(rep.edges.empty());
  const auto& e = mesh.edges()[rep.edges[0]];
  CHECK(mesh.vertex(e.v[0]).y == -0.5);
  CHECK(mesh.vertex(e.v[1]).y == -0.5);
  CHECK_THROWS_AS(classify_elements(mesh, bump), AssumptionViolation);
  CHECK_FALSE(audit_interface(uniform_mesh(8), make_interface("sharp20")).ok);
  CHECK(audit_interface(uniform_mesh(16), make_interface("circle")).ok);
}

TEST_CASE("edge intersection") {
  const auto line = line_interface(1, 0, -0.5);
  const Point2 a = edge_intersection({0, 0}, {1, 0}, line);
  CHECK(a.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.y == 0.0);
  const auto circle = circle_interface({0, 0}, 0.5);
  const Point2 b = edge_intersection({0, 0}, {1, 0}, circle);
  CHECK(b.x == doctest::Approx(0.5).epsilon(1e-12));
  const Point2 c = edge_intersection({1, 0}, {0, 0}, circle);
  CHECK(norm(c - b) <= 1e-12);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const Point2 p{u(rng) * 0.3, u(rng) * 0.3};
    const Point2 q = Point2{u(rng), u(rng)} * (0.7 / std::sqrt(2.0)) / norm(Point2{1, 1}) * 2.0;
    if (circle.phi(q) <= 0) continue;
    const Point2 r1 = edge_intersection(p, q, circle), r2 = edge_intersection(q, p, circle);
    CHECK(std::abs(circle.phi(r1)) <= 1e-12 * norm(q - p));
    CHECK(r1 == r2);
  }
}

TEST_CASE("cut data of the unit triangle") {
  const auto mesh = unit_triangle();
  const auto iface = line_interface(1, 0, -0.5);
  const auto cls = classify_elements(mesh, iface);
  REQUIRE(cls.is_cut(0));
  const auto c = cut_info(mesh, cls, 0, iface, constant(1), constant(1));
  const std::set<std::pair<double, double>> crossings{{c.entry.x, c.entry.y}, {c.exit.x, c.exit.y}};
  CHECK(crossings == std::set<std::pair<double, double>>{{0.5, 0.0}, {0.5, 0.5}});
  CHECK(c.chord_len == doctest::Approx(0.5));
  CHECK(c.area[0] == doctest::Approx(0.375));
  CHECK(c.area[1] == doctest::Approx(0.125));
  CHECK(c.kappa1 == doctest::Approx(0.75));
  CHECK(c.kappa2 == doctest::Approx(0.25));
  CHECK(c.h == doctest::Approx(std::sqrt(2.0)));
  // length scale is the shortest edge (1 here), so gamma = 2 * 1 * 0.5 / 0.5
  CHECK(c.gamma == doctest::Approx(2.0));
  CHECK(c.normal.x == doctest::Approx(1.0));

  const auto c10 = cut_info(mesh, cls, 0, iface, constant(10), constant(1));
  CHECK(c10.kappa1 == doctest::Approx(0.375 / 1.625));
  CHECK(c10.gamma == doctest::Approx(2.0 * 0.5 / (0.375 / 10 + 0.125)));
}

TEST_CASE("equal coefficients and equal areas give equal weights") {
  // y = c with (1 - c)^2 / 2 = 1/4 halves the unit triangle
  const auto mesh = unit_triangle();
  const auto iface = line_interface(0, 1, -(1 - 1 / std::sqrt(2.0)));
  const auto cls = classify_elements(mesh, iface);
  REQUIRE(cls.is_cut(0));
  const auto c = cut_info(mesh, cls, 0, iface, constant(2), constant(2));
  CHECK(c.area[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c.kappa1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.kappa2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cut invariants over the catalog") {
  for (const char* name : {"circle", "flower5"}) {
    CAPTURE(name);
    const auto mesh = uniform_mesh(128);
    const auto iface = make_interface(name);
    const auto geo = build_cut_geometry(mesh, iface, constant(1), constant(1000));
    CHECK(geo.cuts.size() == geo.classification.cut_elements.size());
    check_cut_invariants(mesh, geo, iface);
  }
}

TEST_CASE("reversing the sign of phi swaps the sides") {
  const auto mesh = uniform_mesh(32);
  const auto iface = make_interface("circle");
  const auto neg = negated(iface);
  const auto b1 = [](Point2 p) { return 1.0 + p.x * p.x; };
  const auto b2 = constant(7);
  const auto geo = build_cut_geometry(mesh, iface, b1, b2);
  const auto ngeo = build_cut_geometry(mesh, neg, b2, b1);
  REQUIRE(geo.cuts.size() == ngeo.cuts.size());
  for (std::size_t k = 0; k < geo.cuts.size(); ++k) {
    const auto& c = geo.cuts[k];
    const auto& n = ngeo.cuts[k];
    REQUIRE(c.element == n.element);
    CHECK(n.area[0] == doctest::Approx(c.area[1]).epsilon(1e-12));
    CHECK(n.area[1] == doctest::Approx(c.area[0]).epsilon(1e-12));
    CHECK(n.kappa1 == doctest::Approx(c.kappa2).epsilon(1e-12));
    CHECK(n.gamma == doctest::Approx(c.gamma).epsilon(1e-12));
    CHECK(n.normal.x == doctest::Approx(-c.normal.x));
    CHECK(n.normal.y == doctest::Approx(-c.normal.y));
  }
}

TEST_CASE("degenerate cuts are reported") {
  // clips a corner of area 5e-15
  const auto mesh = unit_triangle();
  const auto iface = line_interface(1, 0, -(1 - 1e-7));
  const auto cls = classify_elements(mesh, iface);
  REQUIRE(cls.is_cut(0));
  CHECK_THROWS_AS(cut_info(mesh, cls, 0, iface, constant(1), constant(1)), DegenerateCut);
  const auto geo = build_cut_geometry(mesh, iface, constant(1), constant(1));
  CHECK(geo.classification.cut_elements.empty());
  CHECK(geo.reclassified == 1);
  CHECK(geo.classification.kind[0] == ElementKind::Interior1);
}

TEST_CASE("Monte Carlo areas of cut triangles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto sample = [&](const std::array<Point2, 3>& p, const Interface& f, int n) {
    int inside = 0;
    for (int k = 0; k < n; ++k) {
      double a = u(rng), b = u(rng);
      if (a + b > 1) {
        a = 1 - a;
        b = 1 - b;
      }
      const Point2 x = p[0] + a * (p[1] - p[0]) + b * (p[2] - p[0]);
      inside += f.phi(x) < 0;
    }
    return static_cast<double>(inside) / n;
  };

  const auto mesh = uniform_mesh(8);
  const auto line = line_interface(0.3, 1, -0.1);
  const auto geo = build_cut_geometry(mesh, line, constant(1), constant(1));
  for (int k = 0; k < 3; ++k) {
    const auto& c = geo.cuts[k * geo.cuts.size() / 3];
    const double frac = c.area[0] / element_geometry(mesh, c.element).area;
    CHECK(std::abs(sample(mesh.triangle_points(c.element), line, 1000000) - frac) < 3e-3);
  }

  // against the curved rule for a circle
  const auto circle = make_interface("circle");
  const auto cgeo = build_cut_geometry(mesh, circle, constant(1), constant(1));
  for (int k = 0; k < 3; ++k) {
    const auto& c = cgeo.cuts[k * cgeo.cuts.size() / 3];
    const auto rules = curved_error_quadrature(mesh, c, circle, 8);
    const double frac = total_weight(rules[0]) / element_geometry(mesh, c.element).area;
    CHECK(std::abs(sample(mesh.triangle_points(c.element), circle, 1000000) - frac) < 3e-3);
  }
}

TEST_CASE("quadrature exactness") {
  const Point2 a{0.1, -0.2}, b{0.9, 0.1}, c{0.3, 0.8};
  for (int order : {2, 4, 6}) {
    const auto rule = triangle_quadrature(a, b, c, order);
    CHECK(total_weight(rule) == doctest::Approx(0.5 * cross(b - a, c - a)).epsilon(1e-14));
    // a monomial of total degree `order` against the fine rule as reference
    for (int i = 0; i <= order; ++i) {
      const int j = order - i;
      const auto mono = [i, j](Point2 p) { return std::pow(p.x, i) * std::pow(p.y, j); };
      // exact value by splitting into 4 congruent parts with the same rule
      QuadRule fine;
      const Point2 ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      append_triangle_rule(a, ab, ca, order, fine);
      append_triangle_rule(ab, b, bc, order, fine);
      append_triangle_rule(ca, bc, c, order, fine);
      append_triangle_rule(ab, bc, ca, order, fine);
      CHECK(integrate(rule, mono) == doctest::Approx(integrate(fine, mono)).epsilon(1e-13));
    }
  }
  CHECK(total_weight(triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 2)) == doctest::Approx(0.5));
  // x^2 y^2 over the unit triangle is 1/180
  const auto unit = triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 4);
  CHECK(integrate(unit, [](Point2 p) { return p.x * p.x * p.y * p.y; }) == doctest::Approx(1.0 / 180).epsilon(1e-14));
  // x^6 over the unit triangle is 1/56
  const auto unit6 = triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 6);
  CHECK(integrate(unit6, [](Point2 p) { return std::pow(p.x, 6); }) == doctest::Approx(1.0 / 56).epsilon(1e-14));
  CHECK_THROWS_AS(triangle_quadrature(a, b, c, 3), std::invalid_argument);
  CHECK_THROWS_AS(check_order(8), std::invalid_argument);
}

TEST_CASE("polygon and segment rules") {
  const std::vector<Point2> quad{{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 1}};
  for (auto origin : {FanOrigin::Centroid, FanOrigin::FirstVertex}) {
    const auto rule = polygon_quadrature(quad, 2, origin);
    CHECK(total_weight(rule) == doctest::Approx(polygon_area(quad)).epsilon(1e-13));
    // two triangles: 0.125 * 1/2 + 0.25 * 2/3
    CHECK(integrate(rule, [](Point2 p) { return p.x + p.y; }) == doctest::Approx(11.0 / 48).epsilon(1e-14));
  }
  const auto seg = segment_quadrature({0, 0}, {1, 0}, 4);
  CHECK(seg.size() == 3);
  CHECK(integrate(seg, [](Point2 p) { return p.x * p.x * p.x; }) == doctest::Approx(0.25).epsilon(1e-14));
  const auto seg6 = segment_quadrature({1, 1}, {-1, 2}, 6);
  CHECK(total_weight(seg6) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("curved error quadrature") {
  const auto mesh = uniform_mesh(16);
  SUBCASE("one subdivision is the straight chord") {
    const auto circle = make_interface("circle");
    const auto geo = build_cut_geometry(mesh, circle, constant(1), constant(1));
    for (const auto& c : geo.cuts) {
      const auto r = curved_error_quadrature(mesh, c, circle, 1);
      CHECK(total_weight(r[0]) == doctest::Approx(c.area[0]).epsilon(1e-13));
      CHECK(total_weight(r[1]) == doctest::Approx(c.area[1]).epsilon(1e-13));
    }
  }
  SUBCASE("linear phi needs no correction") {
    const auto line = line_interface(0.3, 1, -0.1);
    const auto geo = build_cut_geometry(mesh, line, constant(1), constant(1));
    const auto f = [](Point2 p) { return 1 + p.x * p.y; };
    for (const auto& c : geo.cuts) {
      const auto r1 = curved_error_quadrature(mesh, c, line, 1);
      const auto r8 = curved_error_quadrature(mesh, c, line, 8);
      for (int s = 0; s < 2; ++s) CHECK(std::abs(integrate(r1[s], f) - integrate(r8[s], f)) < 1e-13);
    }
  }
  SUBCASE("circle area converges quadratically") {
    const double r0 = 0.5;
    const auto circle = make_interface("circle");
    const auto geo = build_cut_geometry(mesh, circle, constant(1), constant(1));
    for (const auto& c : geo.cuts) {
      // the cap between chord and arc belongs to the inside
      const double theta = 2 * std::asin(std::min(1.0, c.chord_len / (2 * r0)));
      const double exact = c.area[0] + 0.5 * r0 * r0 * (theta - std::sin(theta));
      const double e2 = std::abs(total_weight(curved_error_quadrature(mesh, c, circle, 2)[0]) - exact);
      const double e8 = std::abs(total_weight(curved_error_quadrature(mesh, c, circle, 8)[0]) - exact);
      const double e1 = std::abs(c.area[0] - exact);
      if (e1 < 1e-12) continue;
      CHECK(e8 < e2);
      CHECK(e8 <= 16.0 * 1.5 * e1 / 64.0 + 1e-15);
      const auto fan = curved_error_quadrature(mesh, c, circle, 8, 6, FanOrigin::FirstVertex);
      CHECK(total_weight(fan[0]) ==
            doctest::Approx(total_weight(curved_error_quadrature(mesh, c, circle, 8)[0])).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(curved_error_quadrature(mesh, CutInfo{}, make_interface("circle"), 0), std::invalid_argument);
}
