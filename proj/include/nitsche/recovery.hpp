#pragma once

#include <array>
#include <vector>

#include "nitsche/geometry.hpp"
#include "nitsche/space.hpp"

namespace nitsche {

/// Least-squares quadratic fit around one node.
struct PatchFit {
  int center = -1;                // vertex
  std::vector<int> sample_nodes;  // vertices, the center first
  int ring_count = 0;
  std::array<double, 6> coeffs{};  // 1, xi, eta, xi^2, xi eta, eta^2 in patch-scaled coordinates
  double scale = 1.0;              // patch radius used for the scaling
  double condition_estimate = 0.0;
};

struct PatchOptions {
  int max_rings = 4;
  int min_nodes = 6;
  double rank_tol = 1e-8;  // smallest over largest singular value of the scaled matrix
};

/// Fits a quadratic to the side-s nodal values around `vertex`, growing the
/// patch ring by ring inside the fictitious domain of side s. Throws
/// PatchFailure when no patch up to max_rings is usable.
PatchFit fit_patch(const DofMap& dofmap, const PairedField& field, Side s, int vertex,
                   const PatchOptions& opts = {});

/// Recovered nodal gradients of one side, indexed by the side-local DOF
/// number (global DOF minus dofmap.side_offset(s)).
std::vector<Vec2> ppr_recover(const DofMap& dofmap, const PairedField& field, Side s,
                              const PatchOptions& opts = {});

/// Nodal recovered gradients of both sides, indexed by global DOF, evaluated
/// by linear interpolation on each side.
struct RecoveredGradient {
  std::vector<Vec2> values;
  const DofMap* dofmap = nullptr;

  Vec2 eval(int element, Side s, Point2 x) const;
};

RecoveredGradient uppr(const DofMap& dofmap, const PairedField& field, const PatchOptions& opts = {});

struct Estimate {
  std::vector<double> eta_t;  // per triangle
  double eta = 0.0;
};

/// eta_T = |beta^(1/2) (R u_h - grad u_h)|_{0,T}, with each side of a cut
/// element integrated over its straight-chord part.
Estimate estimate(const CutGeometry& geo, const DofMap& dofmap, const PairedField& field,
                  const RecoveredGradient& recovered, const std::array<ScalarField, 2>& beta, int order = 4);

/// Mesh-dependent norm: broken H1 seminorm plus h-weighted normal-derivative
/// average and 1/h-weighted jump on the interface segments.
double mesh_norm(const CutGeometry& geo, const DofMap& dofmap, const PairedField& field, int order = 4);

}  // namespace nitsche
