#pragma once

#include <vector>

#include "nitsche/sparse.hpp"

namespace nitsche {

struct SolveOptions {
  double tol = 1e-10;  // relative residual |b - Ax| / |b|
  int maxit = 0;       // 0: 20 sqrt(n)
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // true relative residual of the returned vector
  bool converged = false;
  /// Energy 0.5 x'Ax - b'x after each iteration; non-increasing for SPD A.
  std::vector<double> energy;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
/// Throws NotConverged (carrying the iterate with the smallest residual) and
/// IndefiniteDetected when p'Ap <= 0 or a diagonal entry is not positive.
SolveResult solve(const SparseSystem& sys, const SolveOptions& opts = {});

}  // namespace nitsche
