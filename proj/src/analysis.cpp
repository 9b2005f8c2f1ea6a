#include "nitsche/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nitsche/errors.hpp"

namespace nitsche {

PairedField interpolate_exact(const ProblemSpec& problem, const DofMap& dm) {
  if (!problem.exact_u[0] || !problem.exact_u[1]) {
    throw std::invalid_argument("interpolate_exact: the problem has no exact branches");
  }
  PairedField f(dm);
  for (int d = 0; d < dm.n_dofs(); ++d) {
    f.coefficients[d] = problem.exact_u[index(dm.dof_side(d))](dm.mesh().vertex(dm.dof_vertex(d)));
  }
  return f;
}

ErrorTriple error_norms(const CutGeometry& geo, const DofMap& dm, const Interface& iface,
                        const ProblemSpec& problem, const PairedField& uh, const RecoveredGradient& recovered,
                        const ErrorOptions& opts) {
  if (!problem.has_exact()) throw std::invalid_argument("error_norms: exact gradients are required");
  const Mesh& mesh = dm.mesh();
  const auto& cls = geo.classification;
  const PairedField ih = interpolate_exact(problem, dm);
  double de = 0, die = 0, dre = 0, en = 0;

  auto accumulate = [&](int t, Side s, const QuadRule& rule) {
    const int i = index(s);
    const Vec2 gh = uh.gradient(t, s);
    const Vec2 gi = ih.gradient(t, s) - gh;
    for (const auto& q : rule) {
      const Vec2 gu = problem.exact_grad[i](q.x);
      const Vec2 e = gu - gh;
      const Vec2 r = gu - recovered.eval(t, s, q.x);
      const double ee = dot(e, e);
      de += q.w * ee;
      en += q.w * problem.beta[i](q.x) * ee;
      dre += q.w * dot(r, r);
      die += q.w * dot(gi, gi);
    }
  };

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (cls.is_cut(t)) {
      const auto rules =
          curved_error_quadrature(mesh, geo.cuts[geo.cut_index[t]], iface, opts.subdivisions, opts.order, opts.fan);
      for (Side s : kSides) accumulate(t, s, rules[index(s)]);
    } else {
      const Side s = cls.kind[t] == ElementKind::Interior1 ? Side::One : Side::Two;
      const auto p = mesh.triangle_points(t);
      accumulate(t, s, triangle_quadrature(p[0], p[1], p[2], opts.order));
    }
  }
  ErrorTriple out;
  out.De = std::sqrt(std::max(de, 0.0));
  out.Die = std::sqrt(std::max(die, 0.0));
  out.Dre = std::sqrt(std::max(dre, 0.0));
  out.energy = std::sqrt(std::max(en, 0.0));
  out.ndofs = dm.n_dofs();
  return out;
}

std::vector<double> eoc(std::span<const double> errors, std::span<const double> sizes, EocMode mode) {
  if (errors.size() != sizes.size()) throw std::invalid_argument("eoc: size mismatch");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double e0 = errors[k], e1 = errors[k + 1];
    if (!(e0 > 0.0 && e1 > 0.0 && std::isfinite(e0) && std::isfinite(e1))) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double ratio = mode == EocMode::ByH ? sizes[k] / sizes[k + 1] : sizes[k + 1] / sizes[k];
    out.push_back(std::log(e0 / e1) / std::log(ratio));
  }
  return out;
}

double dof_slope(std::span<const double> errors, std::span<const double> dofs) {
  const std::size_t n = errors.size();
  if (n < 2 || dofs.size() != n) throw std::invalid_argument("dof_slope needs two or more rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::log(dofs[k]), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AssumptionReport check_assumption2(const Mesh& mesh, const Interface& iface) { return audit_interface(mesh, iface); }

namespace {

// Elements of `mesh` with a red-refined descendant, up to `sweeps` rounds deep,
// that violates the crossing condition. Child k of triangle t is 4 t + k.
// Only elements that can touch the interface are refined; the others have no
// crossing descendants.
std::vector<int> lookahead_violations(const Mesh& mesh, const Interface& iface, int sweeps) {
  if (sweeps <= 0) return {};
  std::vector<int> ids;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = element_geometry(mesh, t);
    const Point2 c = (g.vertices[0] + g.vertices[1] + g.vertices[2]) / 3.0;
    double radius = 0.0, fmin = std::numeric_limits<double>::infinity();
    for (const auto& v : g.vertices) {
      radius = std::max(radius, norm(v - c));
      fmin = std::min(fmin, std::abs(iface.phi(v)));
    }
    const double lip = iface.lipschitz_bound(c, radius);
    if (lip == 0.0 || fmin <= lip * g.h) ids.push_back(t);
  }
  if (ids.empty()) return {};

  // Compact sub-mesh of the selected triangles.
  std::vector<int> vmap(mesh.num_vertices(), -1);
  std::vector<Point2> verts;
  std::vector<Triangle> tris;
  std::vector<std::uint8_t> ref;
  for (int t : ids) {
    Triangle tri;
    for (int k = 0; k < 3; ++k) {
      int& m = vmap[mesh.triangle(t)[k]];
      if (m < 0) {
        m = static_cast<int>(verts.size());
        verts.push_back(mesh.vertex(mesh.triangle(t)[k]));
      }
      tri[k] = m;
    }
    tris.push_back(tri);
    ref.push_back(static_cast<std::uint8_t>(mesh.refinement_edge(t)));
  }
  Mesh fine(std::move(verts), std::move(tris), std::move(ref));

  std::vector<char> bad(mesh.num_triangles(), 0);
  for (int j = 1; j <= sweeps; ++j) {
    fine = red_refine(fine);
    for (int t : audit_interface(fine, iface).elements) bad[ids[t >> (2 * j)]] = 1;
  }
  std::vector<int> out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (bad[t]) out.push_back(t);
  }
  return out;
}

}  // namespace

AdaptiveResult adaptive_initial_mesh(const Interface& iface, const AdaptiveOptions& opts) {
  if (!(opts.theta > 0.0)) throw std::invalid_argument("adaptive_initial_mesh: theta must be positive");
  AdaptiveResult res;
  res.mesh = uniform_mesh(opts.n0);
  // Rounds driven by curvature and the audit, then repair rounds that only
  // bisect violators (current or found by the look-ahead).
  constexpr int kRepairRounds = 8;
  int rounds = 0, repairs = 0;
  for (;;) {
    const Mesh& mesh = res.mesh;
    const auto sign = snapped_vertex_signs(mesh, iface);
    const auto rep = audit_interface(mesh, iface, sign);
    std::vector<char> marked(mesh.num_triangles(), 0);
    for (int t : rep.elements) marked[t] = 1;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      if (marked[t]) continue;
      const auto& tri = mesh.triangle(t);
      int iso = -1;
      for (int k = 0; k < 3; ++k) {
        if (sign[tri[k]] != sign[tri[(k + 1) % 3]] && sign[tri[k]] != sign[tri[(k + 2) % 3]]) iso = k;
      }
      if (iso < 0) continue;
      const auto g = element_geometry(mesh, t);
      const auto& p = g.vertices;
      const int i1 = (iso + 1) % 3, i2 = (iso + 2) % 3;
      const Point2 a = edge_intersection(p[iso], p[i1], iface, sign[tri[iso]], sign[tri[i1]]);
      const Point2 b = edge_intersection(p[i2], p[iso], iface, sign[tri[i2]], sign[tri[iso]]);
      double kmax = 0.0;
      for (int k = 0; k < 8; ++k) {
        const double s = (k + 0.5) / 8.0;
        kmax = std::max(kmax, iface.curvature_at(a + s * (b - a), 1e-5 * g.h));
      }
      if (g.h * kmax > opts.theta) marked[t] = 1;
    }
    std::vector<int> list;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      if (marked[t]) list.push_back(t);
    }
    if (!list.empty() && rounds < opts.max_levels) {
      res.mesh = bisect(mesh, list);
      ++rounds;
      continue;
    }
    std::vector<int> fix = rep.elements;
    if (fix.empty()) fix = lookahead_violations(mesh, iface, opts.lookahead);
    if (fix.empty()) break;
    if (repairs == kRepairRounds) {
      throw BudgetExceeded("interface '" + iface.name + "' still violates the crossing condition on " +
                           std::to_string(fix.size()) + " element(s) after " + std::to_string(opts.max_levels) +
                           " refinement and " + std::to_string(kRepairRounds) + " repair rounds");
    }
    res.mesh = bisect(mesh, fix);
    ++repairs;
  }
  res.levels = rounds + repairs;
  return res;
}

}  // namespace nitsche
