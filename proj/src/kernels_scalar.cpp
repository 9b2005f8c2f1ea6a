#include "nitsche/kernels.hpp"

namespace nitsche::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void hadamard_scalar(const double* x, const double* y, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void spmv_scalar(int n, const int* row_ptr, const int* col, const double* val, const double* x, double* y) {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

double spmv_dot_scalar(int n, const int* row_ptr, const int* col, const double* val, const double* x, double* y) {
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
    d += x[i] * s;
  }
  return d;
}

std::array<double, 3> cg_update_scalar(double a, const double* p, const double* q, const double* d, const double* b,
                                       double* x, double* r, double* z, std::size_t n) {
  double rz = 0.0, rr = 0.0, xbr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += a * p[i];
    r[i] -= a * q[i];
    z[i] = d[i] * r[i];
    rz += r[i] * z[i];
    rr += r[i] * r[i];
    xbr += x[i] * (b[i] + r[i]);
  }
  return {rz, rr, xbr};
}

}  // namespace

const Table scalar_table{dot_scalar,  axpy_scalar,     xpay_scalar,     hadamard_scalar,
                         spmv_scalar, spmv_dot_scalar, cg_update_scalar};

}  // namespace nitsche::kernels::detail
