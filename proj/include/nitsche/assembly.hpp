#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nitsche/geometry.hpp"
#include "nitsche/space.hpp"
#include "nitsche/sparse.hpp"

namespace nitsche {

/// Flux jump data: a function of the point on the interface and the unit
/// normal pointing from side One into side Two.
using JumpFlux = std::function<double(Point2, Vec2)>;

/// -div(beta grad u) = f in each subdomain, [u] = q and [beta du/dn] = g on
/// the interface, u = dirichlet on the boundary of the square. Index 0 of the
/// arrays is side One.
struct ProblemSpec {
  std::array<ScalarField, 2> beta;
  std::array<ScalarField, 2> source;
  /// Exact branches defined on the whole square (the extensions of u_1, u_2).
  std::array<ScalarField, 2> exact_u;
  std::array<VectorField, 2> exact_grad;
  /// Boundary data per side; defaults to exact_u.
  std::array<ScalarField, 2> dirichlet;
  /// Jump data; when empty they are taken from the exact branches.
  ScalarField q;
  JumpFlux g;

  bool has_exact() const { return exact_u[0] && exact_u[1] && exact_grad[0] && exact_grad[1]; }
  double jump_value(Point2 x) const;
  double jump_flux(Point2 x, Vec2 n) const;
  double boundary_value(Side s, Point2 x) const;
};

enum class QPenaltyScaling { WithHinv, WithoutHinv };

struct AssemblyOptions {
  QPenaltyScaling q_penalty = QPenaltyScaling::WithHinv;
  int volume_order = 2;
  int load_order = 4;
  int interface_order = 4;
};

/// Stiffness, Nitsche and penalty terms plus the load vector, without
/// boundary conditions. Throws Error on non-finite entries.
SparseSystem assemble_unconstrained(const CutGeometry& geo, const DofMap& dofmap, const ProblemSpec& problem,
                                    const AssemblyOptions& opts = {});

/// Nodal boundary values for dofmap.dirichlet_dofs().
std::vector<double> dirichlet_values(const DofMap& dofmap, const ProblemSpec& problem);

/// assemble_unconstrained followed by symmetric elimination of the boundary DOFs.
SparseSystem assemble(const CutGeometry& geo, const DofMap& dofmap, const ProblemSpec& problem,
                      const AssemblyOptions& opts = {});

}  // namespace nitsche
