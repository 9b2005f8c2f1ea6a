#include "nitsche/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nitsche/errors.hpp"

namespace nitsche {

double ProblemSpec::jump_value(Point2 x) const {
  if (q) return q(x);
  if (exact_u[0] && exact_u[1]) return exact_u[0](x) - exact_u[1](x);
  return 0.0;
}

double ProblemSpec::jump_flux(Point2 x, Vec2 n) const {
  if (g) return g(x, n);
  if (exact_grad[0] && exact_grad[1]) {
    return dot(beta[0](x) * exact_grad[0](x) - beta[1](x) * exact_grad[1](x), n);
  }
  return 0.0;
}

double ProblemSpec::boundary_value(Side s, Point2 x) const {
  const int i = index(s);
  if (dirichlet[i]) return dirichlet[i](x);
  if (exact_u[i]) return exact_u[i](x);
  return 0.0;
}

namespace {

struct Local {
  std::array<int, 3> dofs;
  std::array<Point2, 3> p;
  std::array<Vec2, 3> grad;
};

Local local_basis(const DofMap& dm, int t, Side s) {
  Local l;
  l.dofs = dm.element_dofs(t, s);
  l.p = dm.mesh().triangle_points(t);
  l.grad = barycentric_gradients(l.p);
  return l;
}

void add_volume(CsrMatrix& a, std::vector<double>& rhs, const Local& l, const QuadRule& stiff,
                const QuadRule& load, const ScalarField& beta, const ScalarField& f) {
  double bint = 0.0;
  for (const auto& q : stiff) bint += q.w * beta(q.x);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a.add(l.dofs[i], l.dofs[j], bint * dot(l.grad[i], l.grad[j]));
  }
  if (!f) return;
  for (const auto& q : load) {
    const auto lam = barycentric(l.p, q.x);
    const double fw = q.w * f(q.x);
    for (int i = 0; i < 3; ++i) rhs[l.dofs[i]] += fw * lam[i];
  }
}

}  // namespace

SparseSystem assemble_unconstrained(const CutGeometry& geo, const DofMap& dm, const ProblemSpec& problem,
                                    const AssemblyOptions& opts) {
  check_order(opts.volume_order);
  check_order(opts.load_order);
  check_order(opts.interface_order);
  const Mesh& mesh = dm.mesh();
  const auto& cls = geo.classification;

  PatternBuilder pattern(dm.n_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<int, 6> block{-1, -1, -1, -1, -1, -1};
    for (Side s : kSides) {
      if (cls.touches(t, s)) {
        const auto d = dm.element_dofs(t, s);
        for (int k = 0; k < 3; ++k) block[3 * index(s) + k] = d[k];
      }
    }
    pattern.add_block(block);
  }
  for (const auto& seg : geo.segments) {
    const auto d1 = dm.element_dofs(seg.element[0], Side::One);
    const auto d2 = dm.element_dofs(seg.element[1], Side::Two);
    const std::array<int, 6> block{d1[0], d1[1], d1[2], d2[0], d2[1], d2[2]};
    pattern.add_block(block);
  }

  SparseSystem sys;
  sys.matrix = pattern.build();
  sys.rhs.assign(dm.n_dofs(), 0.0);
  auto& a = sys.matrix;

  QuadRule stiff, load;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (cls.is_cut(t)) {
      const auto& cut = geo.cuts[geo.cut_index[t]];
      for (Side s : kSides) {
        const auto poly = cut.poly[index(s)].points();
        stiff.clear();
        load.clear();
        append_polygon_rule(poly, opts.volume_order, stiff);
        append_polygon_rule(poly, opts.load_order, load);
        add_volume(a, sys.rhs, local_basis(dm, t, s), stiff, load, problem.beta[index(s)],
                   problem.source[index(s)]);
      }
    } else {
      const Side s = cls.kind[t] == ElementKind::Interior1 ? Side::One : Side::Two;
      const auto p = mesh.triangle_points(t);
      stiff = triangle_quadrature(p[0], p[1], p[2], opts.volume_order);
      load = triangle_quadrature(p[0], p[1], p[2], opts.load_order);
      add_volume(a, sys.rhs, local_basis(dm, t, s), stiff, load, problem.beta[index(s)],
                 problem.source[index(s)]);
    }
  }

  for (const auto& seg : geo.segments) {
    const std::array<Local, 2> loc{local_basis(dm, seg.element[0], Side::One),
                                   local_basis(dm, seg.element[1], Side::Two)};
    const double kappa[2] = {seg.kappa1, seg.kappa2};
    const double jsign[2] = {1.0, -1.0};
    const double pen = seg.gamma / seg.h;
    const double qpen = opts.q_penalty == QPenaltyScaling::WithHinv ? pen : seg.gamma;
    for (const auto& q : segment_quadrature(seg.a, seg.b, opts.interface_order)) {
      // J: jump of each of the six basis functions; F: weighted average of beta dn.
      double jv[6], fv[6], avg_star[6];
      int dof[6];
      for (int s = 0; s < 2; ++s) {
        const auto lam = barycentric(loc[s].p, q.x);
        const double b = problem.beta[s](q.x);
        for (int k = 0; k < 3; ++k) {
          const int m = 3 * s + k;
          dof[m] = loc[s].dofs[k];
          jv[m] = jsign[s] * lam[k];
          fv[m] = kappa[s] * b * dot(loc[s].grad[k], seg.normal);
          avg_star[m] = kappa[1 - s] * lam[k];
        }
      }
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
          a.add(dof[i], dof[j], q.w * (-jv[j] * fv[i] - jv[i] * fv[j] + pen * jv[i] * jv[j]));
        }
      }
      const double qv = problem.jump_value(q.x);
      const double gv = problem.jump_flux(q.x, seg.normal);
      for (int i = 0; i < 6; ++i) {
        sys.rhs[dof[i]] += q.w * (-qv * fv[i] + qpen * qv * jv[i] + gv * avg_star[i]);
      }
    }
  }

  for (double v : a.val) {
    if (!std::isfinite(v)) throw Error("assembly produced a non-finite matrix entry");
  }
  for (double v : sys.rhs) {
    if (!std::isfinite(v)) throw Error("assembly produced a non-finite load entry");
  }
  return sys;
}

std::vector<double> dirichlet_values(const DofMap& dm, const ProblemSpec& problem) {
  std::vector<double> g;
  g.reserve(dm.dirichlet_dofs().size());
  for (int d : dm.dirichlet_dofs()) g.push_back(problem.boundary_value(dm.dof_side(d), dm.mesh().vertex(dm.dof_vertex(d))));
  return g;
}

SparseSystem assemble(const CutGeometry& geo, const DofMap& dofmap, const ProblemSpec& problem,
                      const AssemblyOptions& opts) {
  auto sys = assemble_unconstrained(geo, dofmap, problem, opts);
  const auto g = dirichlet_values(dofmap, problem);
  apply_dirichlet(sys, dofmap.dirichlet_dofs(), g);
  return sys;
}

}  // namespace nitsche
