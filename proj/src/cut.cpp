#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <string>

#include "nitsche/errors.hpp"
#include "nitsche/geometry.hpp"

namespace nitsche {
namespace {

std::atomic<long> g_projection_failures{0};

// Length scale inside the penalty weight: the shortest edge, which is the grid
// spacing 2/n on Cartesian meshes. The h^-1 factor in front uses the diameter.
double mesh_size(const ElementGeometry& g) {
  const auto& v = g.vertices;
  return std::min({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
}

Point2 centroid(const std::array<Point2, 3>& p) { return (p[0] + p[1] + p[2]) / 3.0; }

double kappa1_of(double b1, double b2, double a1, double a2) { return b2 * a1 / (b2 * a1 + b1 * a2); }

}  // namespace

Point2 edge_intersection(Point2 p0, Point2 p1, const Interface& iface, int s0, int s1) {
  if (s0 == s1) throw std::invalid_argument("edge_intersection: endpoints on the same side");
  if (lex_less(p1, p0)) {
    std::swap(p0, p1);
    std::swap(s0, s1);
  }
  const double len = norm(p1 - p0);
  const double tol = 1e-12 * len;
  if (std::abs(iface.phi(p0)) <= tol) return p0;
  if (std::abs(iface.phi(p1)) <= tol) return p1;
  Point2 lo = p0, hi = p1;
  for (int it = 0; it < 200; ++it) {
    const Point2 m = midpoint(lo, hi);
    // The bracket can close on a jump of phi (petal6 at the origin).
    if (m == lo || m == hi || norm(hi - lo) <= 1e-15 * len) return m;
    const double f = iface.phi(m);
    if (std::abs(f) <= tol) return m;
    const int sm = f < 0.0 ? -1 : 1;
    if (sm == s0) {
      lo = m;
    } else {
      hi = m;
    }
  }
  throw NoConvergence("edge_intersection did not converge on interface '" + iface.name + "'");
}

Point2 edge_intersection(Point2 p0, Point2 p1, const Interface& iface) {
  const double f0 = iface.phi(p0), f1 = iface.phi(p1);
  return edge_intersection(p0, p1, iface, f0 < 0.0 ? -1 : 1, f1 < 0.0 ? -1 : 1);
}

CutInfo cut_info(const Mesh& mesh, const Classification& cls, int t, const Interface& iface,
                 const ScalarField& beta1, const ScalarField& beta2) {
  const auto& tri = mesh.triangle(t);
  const auto g = element_geometry(mesh, t);
  const auto& p = g.vertices;
  int s[3] = {cls.vertex_sign[tri[0]], cls.vertex_sign[tri[1]], cls.vertex_sign[tri[2]]};
  int iso = -1;
  for (int k = 0; k < 3; ++k) {
    if (s[k] != s[(k + 1) % 3] && s[k] != s[(k + 2) % 3]) iso = k;
  }
  if (iso < 0) throw std::invalid_argument("cut_info: element " + std::to_string(t) + " is not cut");
  const int i1 = (iso + 1) % 3, i2 = (iso + 2) % 3;

  CutInfo c;
  c.element = t;
  c.iso_vertex = iso;
  c.iso_side = s[iso] < 0 ? Side::One : Side::Two;
  c.h = g.h;
  c.entry = edge_intersection(p[iso], p[i1], iface, s[iso], s[i1]);
  c.exit = edge_intersection(p[i2], p[iso], iface, s[i2], s[iso]);

  SmallPolygon tri_part, quad_part;
  tri_part.p = {p[iso], c.entry, c.exit, Point2{}};
  tri_part.n = 3;
  quad_part.p = {c.entry, p[i1], p[i2], c.exit};
  quad_part.n = 4;
  const double a_iso = polygon_area(tri_part.points());
  const double a_other = g.area - a_iso;
  const int is = index(c.iso_side);
  c.poly[is] = tri_part;
  c.poly[1 - is] = quad_part;
  c.area[is] = a_iso;
  c.area[1 - is] = a_other;

  if (std::min(a_iso, a_other) < 1e-12 * g.area) {
    const Side majority = a_iso >= a_other ? c.iso_side : other(c.iso_side);
    throw DegenerateCut("element " + std::to_string(t) + " has a cut part below 1e-12 of its area", t, majority);
  }

  const Vec2 d = c.exit - c.entry;
  c.chord_len = norm(d);
  const Vec2 right{d.y, -d.x};
  c.normal = (c.iso_side == Side::One ? right : -right) / c.chord_len;

  const Point2 mid = midpoint(c.entry, c.exit);
  const double b1 = beta1(mid), b2 = beta2(mid);
  c.kappa1 = kappa1_of(b1, b2, c.area[0], c.area[1]);
  c.kappa2 = 1.0 - c.kappa1;
  c.gamma = 2.0 * mesh_size(g) * c.chord_len / (c.area[0] / b1 + c.area[1] / b2);
  return c;
}

CutGeometry build_cut_geometry(const Mesh& mesh, const Interface& iface, const ScalarField& beta1,
                               const ScalarField& beta2) {
  CutGeometry geo;
  geo.classification = classify_elements(mesh, iface);
  auto& cls = geo.classification;

  std::vector<CutInfo> all;
  all.reserve(cls.cut_elements.size());
  for (int t : cls.cut_elements) {
    try {
      all.push_back(cut_info(mesh, cls, t, iface, beta1, beta2));
    } catch (const DegenerateCut& e) {
      cls.kind[t] = interior_kind(e.majority());
      ++geo.reclassified;
    }
  }
  rebuild_lists(cls);
  geo.cuts = std::move(all);
  geo.cut_index.assign(mesh.num_triangles(), -1);
  for (int k = 0; k < static_cast<int>(geo.cuts.size()); ++k) geo.cut_index[geo.cuts[k].element] = k;

  for (const auto& c : geo.cuts) {
    InterfaceSegment s;
    s.element = {c.element, c.element};
    s.a = c.entry;
    s.b = c.exit;
    s.normal = c.normal;
    s.length = c.chord_len;
    s.kappa1 = c.kappa1;
    s.kappa2 = c.kappa2;
    s.gamma = c.gamma;
    s.h = c.h;
    geo.segments.push_back(s);
  }

  // Mesh edges with an interior element of each side on either side carry
  // the interface themselves.
  for (const auto& e : mesh.edges()) {
    if (e.is_boundary()) continue;
    int t1 = e.triangles[0], t2 = e.triangles[1];
    if (cls.kind[t1] == ElementKind::Interior2 && cls.kind[t2] == ElementKind::Interior1) std::swap(t1, t2);
    if (!(cls.kind[t1] == ElementKind::Interior1 && cls.kind[t2] == ElementKind::Interior2)) continue;
    const auto g1 = element_geometry(mesh, t1), g2 = element_geometry(mesh, t2);
    InterfaceSegment s;
    s.element = {t1, t2};
    s.a = mesh.vertex(e.v[0]);
    s.b = mesh.vertex(e.v[1]);
    const Vec2 d = s.b - s.a;
    s.length = norm(d);
    s.normal = perp(d) / s.length;
    if (dot(s.normal, centroid(g2.vertices) - centroid(g1.vertices)) < 0.0) s.normal = -s.normal;
    const Point2 mid = midpoint(s.a, s.b);
    const double b1 = beta1(mid), b2 = beta2(mid);
    s.kappa1 = kappa1_of(b1, b2, g1.area, g2.area);
    s.kappa2 = 1.0 - s.kappa1;
    s.h = std::max(g1.h, g2.h);
    s.gamma = 2.0 * std::max(mesh_size(g1), mesh_size(g2)) * s.length / (g1.area / b1 + g2.area / b2);
    geo.segments.push_back(s);
  }
  return geo;
}

long curved_projection_failures() { return g_projection_failures.load(); }

std::array<QuadRule, 2> curved_error_quadrature(const Mesh& mesh, const CutInfo& cut, const Interface& iface,
                                                int subdivisions, int order, FanOrigin origin) {
  if (subdivisions < 1) throw std::invalid_argument("curved_error_quadrature: subdivisions must be >= 1");
  const auto p = mesh.triangle_points(cut.element);
  const int iso = cut.iso_vertex;
  const Point2 v0 = p[iso], v1 = p[(iso + 1) % 3], v2 = p[(iso + 2) % 3];

  std::vector<Point2> knots;
  knots.reserve(subdivisions > 1 ? subdivisions - 1 : 0);
  const Vec2 d = cut.exit - cut.entry;
  const Vec2 n = cut.normal;
  const double step = cut.h / 64.0;
  for (int j = 1; j < subdivisions; ++j) {
    const Point2 k = cut.entry + (static_cast<double>(j) / subdivisions) * d;
    const double f0 = iface.phi(k);
    Point2 found = k;
    bool ok = f0 == 0.0;
    // Walk outwards in both directions until phi changes sign, then bisect.
    for (int m = 1; m <= 32 && !ok; ++m) {
      for (double dir : {1.0, -1.0}) {
        const Point2 q = k + (dir * m * step) * n;
        if ((iface.phi(q) < 0.0) != (f0 < 0.0)) {
          const Point2 r = k + (dir * (m - 1) * step) * n;
          try {
            found = edge_intersection(r, q, iface, iface.phi(r) < 0.0 ? -1 : 1, f0 < 0.0 ? 1 : -1);
            ok = true;
          } catch (const NoConvergence&) {
          }
          break;
        }
      }
    }
    if (!ok) {
      if (g_projection_failures.fetch_add(1) == 0) {
        std::cerr << "warning: interface projection failed in element " << cut.element
                  << "; using the straight chord there\n";
      }
    }
    knots.push_back(found);
  }

  std::vector<Point2> iso_poly{v0, cut.entry};
  iso_poly.insert(iso_poly.end(), knots.begin(), knots.end());
  iso_poly.push_back(cut.exit);
  std::vector<Point2> other_poly{cut.entry, v1, v2, cut.exit};
  other_poly.insert(other_poly.end(), knots.rbegin(), knots.rend());

  std::array<QuadRule, 2> out;
  const int is = index(cut.iso_side);
  append_polygon_rule(iso_poly, order, out[is], origin);
  append_polygon_rule(other_poly, order, out[1 - is], origin);
  return out;
}

}  // namespace nitsche
