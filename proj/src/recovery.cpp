#include "nitsche/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nitsche/errors.hpp"

namespace nitsche {
namespace {

constexpr int kCols = 6;

// Singular values of a small square matrix (column-major) by one-sided Jacobi.
std::array<double, kCols> singular_values(std::array<double, kCols * kCols> a) {
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < kCols - 1; ++i) {
      for (int j = i + 1; j < kCols; ++j) {
        double alpha = 0, beta = 0, gamma = 0;
        for (int k = 0; k < kCols; ++k) {
          alpha += a[i * kCols + k] * a[i * kCols + k];
          beta += a[j * kCols + k] * a[j * kCols + k];
          gamma += a[i * kCols + k] * a[j * kCols + k];
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t), s = c * t;
        for (int k = 0; k < kCols; ++k) {
          const double ai = a[i * kCols + k], aj = a[j * kCols + k];
          a[i * kCols + k] = c * ai - s * aj;
          a[j * kCols + k] = s * ai + c * aj;
        }
      }
    }
    if (!rotated) break;
  }
  std::array<double, kCols> sv{};
  for (int i = 0; i < kCols; ++i) {
    double s = 0;
    for (int k = 0; k < kCols; ++k) s += a[i * kCols + k] * a[i * kCols + k];
    sv[i] = std::sqrt(s);
  }
  return sv;
}

struct LsqResult {
  std::array<double, kCols> coeffs{};
  double cond = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// Least squares with column scaling and Householder QR. `m` is column-major, rows x 6.
LsqResult least_squares(std::vector<double> m, std::vector<double> rhs, int rows, double rank_tol) {
  LsqResult out;
  if (rows < kCols) return out;
  std::array<double, kCols> colscale{};
  for (int j = 0; j < kCols; ++j) {
    double s = 0;
    for (int i = 0; i < rows; ++i) s += m[j * rows + i] * m[j * rows + i];
    s = std::sqrt(s);
    if (s == 0.0) return out;
    colscale[j] = s;
    for (int i = 0; i < rows; ++i) m[j * rows + i] /= s;
  }
  for (int k = 0; k < kCols; ++k) {
    double norm_x = 0;
    for (int i = k; i < rows; ++i) norm_x += m[k * rows + i] * m[k * rows + i];
    norm_x = std::sqrt(norm_x);
    if (norm_x == 0.0) return out;
    const double alpha = m[k * rows + k] > 0 ? -norm_x : norm_x;
    std::vector<double> v(rows - k);
    for (int i = k; i < rows; ++i) v[i - k] = m[k * rows + i];
    v[0] -= alpha;
    double vv = 0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    for (int j = k; j < kCols; ++j) {
      double d = 0;
      for (int i = k; i < rows; ++i) d += v[i - k] * m[j * rows + i];
      const double f = 2 * d / vv;
      for (int i = k; i < rows; ++i) m[j * rows + i] -= f * v[i - k];
    }
    double d = 0;
    for (int i = k; i < rows; ++i) d += v[i - k] * rhs[i];
    const double f = 2 * d / vv;
    for (int i = k; i < rows; ++i) rhs[i] -= f * v[i - k];
  }
  std::array<double, kCols * kCols> r{};
  for (int j = 0; j < kCols; ++j) {
    for (int i = 0; i <= j; ++i) r[j * kCols + i] = m[j * rows + i];
  }
  const auto sv = singular_values(r);
  const double smax = *std::max_element(sv.begin(), sv.end());
  const double smin = *std::min_element(sv.begin(), sv.end());
  out.cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smin >= rank_tol * smax)) return out;
  for (int i = kCols - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j < kCols; ++j) s -= r[j * kCols + i] * out.coeffs[j];
    out.coeffs[i] = s / r[i * kCols + i];
  }
  for (int j = 0; j < kCols; ++j) out.coeffs[j] /= colscale[j];
  out.ok = true;
  return out;
}

}  // namespace

PatchFit fit_patch(const DofMap& dm, const PairedField& field, Side s, int vertex, const PatchOptions& opts) {
  const Mesh& mesh = dm.mesh();
  const auto& cls = dm.classification();
  const auto& nd = dm.node_dofs(s);
  if (nd[vertex] < 0) throw std::invalid_argument("fit_patch: vertex has no DOF on this side");

  std::vector<int> nodes{vertex};
  std::vector<char> in_set(mesh.num_vertices(), 0);
  in_set[vertex] = 1;
  std::size_t frontier_begin = 0;
  PatchFit fit;
  fit.center = vertex;
  const Point2 z = mesh.vertex(vertex);

  for (int ring = 1; ring <= opts.max_rings; ++ring) {
    const std::size_t frontier_end = nodes.size();
    for (std::size_t k = frontier_begin; k < frontier_end; ++k) {
      for (int t : mesh.vertex_triangles(nodes[k])) {
        if (!cls.touches(t, s)) continue;
        for (int w : mesh.triangle(t)) {
          if (!in_set[w]) {
            in_set[w] = 1;
            nodes.push_back(w);
          }
        }
      }
    }
    frontier_begin = frontier_end;
    const int rows = static_cast<int>(nodes.size());
    if (rows < opts.min_nodes) continue;

    double radius = 0;
    for (int w : nodes) radius = std::max(radius, norm(mesh.vertex(w) - z));
    std::vector<double> m(static_cast<std::size_t>(rows) * kCols), rhs(rows);
    for (int i = 0; i < rows; ++i) {
      const Vec2 d = (mesh.vertex(nodes[i]) - z) / radius;
      const double row[kCols] = {1.0, d.x, d.y, d.x * d.x, d.x * d.y, d.y * d.y};
      for (int j = 0; j < kCols; ++j) m[j * rows + i] = row[j];
      rhs[i] = field.coefficients[nd[nodes[i]]];
    }
    const auto lsq = least_squares(std::move(m), std::move(rhs), rows, opts.rank_tol);
    fit.ring_count = ring;
    fit.condition_estimate = lsq.cond;
    if (!lsq.ok) continue;
    fit.sample_nodes = nodes;
    fit.coeffs = lsq.coeffs;
    fit.scale = radius;
    return fit;
  }
  throw PatchFailure("no usable recovery patch within " + std::to_string(opts.max_rings) + " rings at vertex " +
                         std::to_string(vertex) + " on side " + std::to_string(index(s) + 1),
                     s, vertex);
}

std::vector<Vec2> ppr_recover(const DofMap& dm, const PairedField& field, Side s, const PatchOptions& opts) {
  const int offset = dm.side_offset(s);
  std::vector<Vec2> out(dm.n_side_dofs(s));
  for (int k = 0; k < dm.n_side_dofs(s); ++k) {
    const auto fit = fit_patch(dm, field, s, dm.dof_vertex(offset + k), opts);
    out[k] = Vec2{fit.coeffs[1], fit.coeffs[2]} / fit.scale;
  }
  return out;
}

Vec2 RecoveredGradient::eval(int element, Side s, Point2 x) const {
  const auto dofs = dofmap->element_dofs(element, s);
  if (dofs[0] < 0) throw std::invalid_argument("element " + std::to_string(element) + " lacks this side");
  const auto lam = barycentric(dofmap->mesh().triangle_points(element), x);
  Vec2 g;
  for (int k = 0; k < 3; ++k) g += lam[k] * values[dofs[k]];
  return g;
}

RecoveredGradient uppr(const DofMap& dm, const PairedField& field, const PatchOptions& opts) {
  RecoveredGradient rg;
  rg.dofmap = &dm;
  rg.values.resize(dm.n_dofs());
  for (Side s : kSides) {
    const auto side = ppr_recover(dm, field, s, opts);
    std::copy(side.begin(), side.end(), rg.values.begin() + dm.side_offset(s));
  }
  return rg;
}

Estimate estimate(const CutGeometry& geo, const DofMap& dm, const PairedField& field,
                  const RecoveredGradient& recovered, const std::array<ScalarField, 2>& beta, int order) {
  const Mesh& mesh = dm.mesh();
  const auto& cls = geo.classification;
  Estimate est;
  est.eta_t.assign(mesh.num_triangles(), 0.0);
  double total = 0;
  QuadRule rule;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double e2 = 0;
    for (Side s : kSides) {
      if (!cls.touches(t, s)) continue;
      rule.clear();
      if (cls.is_cut(t)) {
        append_polygon_rule(geo.cuts[geo.cut_index[t]].poly[index(s)].points(), order, rule);
      } else {
        const auto p = mesh.triangle_points(t);
        append_triangle_rule(p[0], p[1], p[2], order, rule);
      }
      const Vec2 gh = field.gradient(t, s);
      for (const auto& q : rule) {
        const Vec2 d = recovered.eval(t, s, q.x) - gh;
        e2 += q.w * beta[index(s)](q.x) * dot(d, d);
      }
    }
    est.eta_t[t] = std::sqrt(std::max(e2, 0.0));
    total += e2;
  }
  est.eta = std::sqrt(std::max(total, 0.0));
  return est;
}

double mesh_norm(const CutGeometry& geo, const DofMap& dm, const PairedField& field, int order) {
  const Mesh& mesh = dm.mesh();
  const auto& cls = geo.classification;
  double total = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (Side s : kSides) {
      if (!cls.touches(t, s)) continue;
      const double area = cls.is_cut(t) ? geo.cuts[geo.cut_index[t]].area[index(s)]
                                        : element_geometry(mesh, t).area;
      const Vec2 g = field.gradient(t, s);
      total += area * dot(g, g);
    }
  }
  for (const auto& seg : geo.segments) {
    const Vec2 g1 = field.gradient(seg.element[0], Side::One);
    const Vec2 g2 = field.gradient(seg.element[1], Side::Two);
    const double avg = seg.kappa1 * dot(g1, seg.normal) + seg.kappa2 * dot(g2, seg.normal);
    total += seg.h * seg.length * avg * avg;
    for (const auto& q : segment_quadrature(seg.a, seg.b, order)) {
      const double jump = field.eval(seg.element[0], Side::One, q.x).value -
                          field.eval(seg.element[1], Side::Two, q.x).value;
      total += q.w * jump * jump / seg.h;
    }
  }
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace nitsche
