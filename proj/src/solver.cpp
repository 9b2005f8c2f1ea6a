#include "nitsche/solver.hpp"

#include <cmath>
#include <string>

#include "nitsche/errors.hpp"
#include "nitsche/kernels.hpp"

namespace nitsche {

SolveResult solve(const SparseSystem& sys, const SolveOptions& opts) {
  const auto& a = sys.matrix;
  const int n = a.n;
  const auto& b = sys.rhs;
  if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw std::invalid_argument("solver tolerance must lie in (0, 1)");
  const int maxit = opts.maxit > 0 ? opts.maxit : static_cast<int>(std::ceil(20.0 * std::sqrt(std::max(n, 1))));

  SolveResult out;
  out.x.assign(n, 0.0);
  auto& rep = out.report;
  const double bnorm = std::sqrt(kernels::dot(b, b));
  if (bnorm == 0.0) {
    rep.converged = true;
    return out;
  }

  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.at(i, i);
    if (!(d > 0.0)) throw IndefiniteDetected("non-positive diagonal entry in row " + std::to_string(i));
    inv_diag[i] = 1.0 / d;
  }

  auto& x = out.x;
  std::vector<double> r(b), z(n), p(n), ap(n), best(x);
  double best_res = 1.0;
  kernels::hadamard(inv_diag, r, z);
  p = z;
  double rho = kernels::dot(r, z);

  for (int it = 1; it <= maxit; ++it) {
    const double pap = kernels::spmv_dot(a, p, ap);
    if (!(pap > 0.0)) {
      throw IndefiniteDetected("p'Ap = " + std::to_string(pap) + " at iteration " + std::to_string(it));
    }
    const double alpha = rho / pap;
    // {r'z, r'r, x'(b + r)}; the energy 0.5 x'Ax - b'x equals -0.5 x'(b + r).
    const auto sums = kernels::cg_update(alpha, p, ap, inv_diag, b, x, r, z);
    rep.iterations = it;
    rep.energy.push_back(-0.5 * sums[2]);
    double res = std::sqrt(sums[1]) / bnorm;
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= opts.tol) {
      // Confirm with the true residual; restart from it if rounding drifted.
      kernels::spmv(a, x, ap);
      for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
      res = std::sqrt(kernels::dot(r, r)) / bnorm;
      if (res <= opts.tol) {
        rep.residual = res;
        rep.converged = true;
        return out;
      }
      kernels::hadamard(inv_diag, r, z);
      p = z;
      rho = kernels::dot(r, z);
      continue;
    }
    kernels::xpay(z, sums[0] / rho, p);
    rho = sums[0];
  }

  kernels::spmv(a, best, ap);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (b[i] - ap[i]) * (b[i] - ap[i]);
  throw NotConverged("CG did not reach " + std::to_string(opts.tol) + " in " + std::to_string(maxit) +
                         " iterations",
                     std::move(best), maxit, std::sqrt(s) / bnorm);
}

}  // namespace nitsche
