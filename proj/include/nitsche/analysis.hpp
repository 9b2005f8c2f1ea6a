#pragma once

#include <span>
#include <vector>

#include "nitsche/assembly.hpp"
#include "nitsche/geometry.hpp"
#include "nitsche/recovery.hpp"
#include "nitsche/space.hpp"

namespace nitsche {

/// Nodal interpolation of the exact branches on each fictitious domain.
/// Throws std::invalid_argument when the problem has no exact solution.
PairedField interpolate_exact(const ProblemSpec& problem, const DofMap& dofmap);

struct ErrorTriple {
  double De = 0.0;      // |grad u - grad u_h|
  double Die = 0.0;     // |grad I u - grad u_h|
  double Dre = 0.0;     // |grad u - R u_h|
  double energy = 0.0;  // |beta^(1/2) (grad u - grad u_h)|
  int ndofs = 0;
  double h = 0.0;
};

struct ErrorOptions {
  int subdivisions = 8;
  int order = 6;
  FanOrigin fan = FanOrigin::Centroid;
};

/// Errors over the two subdomains; cut elements are integrated with the
/// curved-interface quadrature.
ErrorTriple error_norms(const CutGeometry& geo, const DofMap& dofmap, const Interface& iface,
                        const ProblemSpec& problem, const PairedField& uh, const RecoveredGradient& recovered,
                        const ErrorOptions& opts = {});

enum class EocMode { ByH, ByDof };

/// Orders between consecutive rows; NaN where an error is zero or not finite.
std::vector<double> eoc(std::span<const double> errors, std::span<const double> sizes, EocMode mode);

/// Least-squares slope of log(error) against log(DOF), sign flipped so that
/// decreasing errors give positive values.
double dof_slope(std::span<const double> errors, std::span<const double> dofs);

AssumptionReport check_assumption2(const Mesh& mesh, const Interface& iface);

struct AdaptiveOptions {
  double theta = 0.8;
  int n0 = 16;
  int max_levels = 12;
  /// Red-refinement sweeps whose meshes must also pass the crossing audit;
  /// ancestors of violating descendants are bisected.
  int lookahead = 0;
};

struct AdaptiveResult {
  Mesh mesh;
  int levels = 0;  // bisection rounds performed
};

/// Starts from uniform_mesh(n0) and bisects every cut element whose diameter
/// times the largest curvature sampled on its chord exceeds theta, plus every
/// element violating the crossing condition, for at most max_levels rounds.
/// Up to 8 repair rounds then bisect remaining violators and the ancestors of
/// violating look-ahead descendants. Throws BudgetExceeded if violations remain.
AdaptiveResult adaptive_initial_mesh(const Interface& iface, const AdaptiveOptions& opts = {});

}  // namespace nitsche
