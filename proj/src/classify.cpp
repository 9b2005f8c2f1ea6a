#include <algorithm>
#include <cmath>
#include <string>

#include "nitsche/errors.hpp"
#include "nitsche/geometry.hpp"

namespace nitsche {
namespace {

constexpr int kEdgeSamples = 64;

Point2 centroid(const std::array<Point2, 3>& p) { return (p[0] + p[1] + p[2]) / 3.0; }

int sign_of(double v) { return v < 0.0 ? -1 : (v > 0.0 ? 1 : 0); }

// Sign changes along an edge: snapped endpoint signs with the interior
// sample signs in between. Samples inside the snapping band count as zero.
int count_crossings(Point2 a, Point2 b, double fa, double fb, int sa, int sb, const Interface& iface) {
  const double len = norm(b - a);
  const double lip = iface.lipschitz_bound(midpoint(a, b), 0.5 * len);
  if (lip > 0.0 && std::abs(fa) + std::abs(fb) > lip * len) {
    return sa != sb ? 1 : 0;
  }
  int changes = 0;
  int prev = sa;
  for (int k = 1; k <= kEdgeSamples; ++k) {
    const double s = static_cast<double>(k) / (kEdgeSamples + 1);
    const double f = iface.phi(a + s * (b - a));
    if (std::abs(f) < 1e-10 * len) continue;
    const int sg = sign_of(f);
    if (sg != prev) ++changes;
    prev = sg;
  }
  if (sb != prev) ++changes;
  return changes;
}

}  // namespace

void rebuild_lists(Classification& c) {
  c.cut_elements.clear();
  for (auto& v : c.strict) v.clear();
  for (auto& v : c.covers) v.clear();
  for (int t = 0; t < static_cast<int>(c.kind.size()); ++t) {
    switch (c.kind[t]) {
      case ElementKind::Interior1:
        c.strict[0].push_back(t);
        c.covers[0].push_back(t);
        break;
      case ElementKind::Interior2:
        c.strict[1].push_back(t);
        c.covers[1].push_back(t);
        break;
      case ElementKind::Cut:
        c.cut_elements.push_back(t);
        c.covers[0].push_back(t);
        c.covers[1].push_back(t);
        break;
    }
  }
}

std::vector<signed char> snapped_vertex_signs(const Mesh& mesh, const Interface& iface) {
  const int nv = mesh.num_vertices();
  std::vector<signed char> sign(nv, 1);
  for (int v = 0; v < nv; ++v) {
    const double f = iface.phi(mesh.vertex(v));
    double h = 0.0;
    for (int t : mesh.vertex_triangles(v)) h = std::max(h, element_geometry(mesh, t).h);
    if (std::abs(f) >= 1e-10 * h) {
      sign[v] = f < 0.0 ? -1 : 1;
      continue;
    }
    double s = 0.0;
    for (int t : mesh.vertex_triangles(v)) s += iface.phi(centroid(mesh.triangle_points(t)));
    sign[v] = s < 0.0 ? -1 : 1;
  }
  return sign;
}

AssumptionReport audit_interface(const Mesh& mesh, const Interface& iface) {
  const auto sign = snapped_vertex_signs(mesh, iface);
  return audit_interface(mesh, iface, sign);
}

AssumptionReport audit_interface(const Mesh& mesh, const Interface& iface, std::span<const signed char> sign) {
  AssumptionReport rep;
  std::vector<double> fv(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) fv[v] = iface.phi(mesh.vertex(v));

  rep.edge_crossings.assign(mesh.num_edges(), 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ev = mesh.edges()[e].v;
    const int c = count_crossings(mesh.vertex(ev[0]), mesh.vertex(ev[1]), fv[ev[0]], fv[ev[1]], sign[ev[0]],
                                  sign[ev[1]], iface);
    rep.edge_crossings[e] = static_cast<std::uint8_t>(std::min(c, 255));
    if (c > 1) rep.edges.push_back(e);
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const bool mixed = !(sign[tri[0]] == sign[tri[1]] && sign[tri[1]] == sign[tri[2]]);
    int total = 0, worst = 0;
    for (int e : mesh.triangle_edges(t)) {
      total += rep.edge_crossings[e];
      worst = std::max<int>(worst, rep.edge_crossings[e]);
    }
    const bool bad = mixed ? (total != 2 || worst > 1) : total != 0;
    if (bad) rep.elements.push_back(t);
  }
  rep.ok = rep.elements.empty() && rep.edges.empty();
  return rep;
}

Classification classify_elements(const Mesh& mesh, const Interface& iface) {
  Classification c;
  c.vertex_sign = snapped_vertex_signs(mesh, iface);
  const auto rep = audit_interface(mesh, iface, c.vertex_sign);
  if (!rep.ok) {
    throw AssumptionViolation("interface '" + iface.name + "' crosses " + std::to_string(rep.elements.size()) +
                                  " element(s) other than exactly twice (first: " +
                                  std::to_string(rep.elements.empty() ? -1 : rep.elements.front()) + ")",
                              rep.elements);
  }
  c.kind.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const int s = c.vertex_sign[tri[0]] + c.vertex_sign[tri[1]] + c.vertex_sign[tri[2]];
    c.kind[t] = s == -3 ? ElementKind::Interior1 : s == 3 ? ElementKind::Interior2 : ElementKind::Cut;
  }
  rebuild_lists(c);
  return c;
}

}  // namespace nitsche
