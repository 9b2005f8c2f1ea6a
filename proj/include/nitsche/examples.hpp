#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nitsche/assembly.hpp"
#include "nitsche/interface.hpp"

namespace nitsche {

/// A built-in benchmark: interface, coefficients, source and exact branches.
struct Example {
  std::string name;
  std::string title;
  Interface iface;
  ProblemSpec problem;
  /// True for examples run on a curvature-refined initial mesh with
  /// orders reported against the DOF count.
  bool adaptive = false;
  /// First uniform grid of a study (h = 2 / n). Coarser grids violate the
  /// two-crossing condition for the flower.
  int uniform_n0 = 32;
  /// Background grid of the adaptive initial mesh.
  int adaptive_n0 = 16;
  /// Bisection budget of the initial mesh.
  int max_levels = 12;
};

/// "ex51a", "ex51b", "ex51c", "ex51d", "ex52", "ex53", "ex54", "ex55".
Example make_example(std::string_view name, int polyline_samples = 4096);
std::vector<std::string> example_names();

/// Source -div(beta grad u) for a branch given its gradient, Laplacian and
/// the gradient of beta.
double divergence_source(double beta, Vec2 grad_beta, Vec2 grad_u, double lap_u);

}  // namespace nitsche
