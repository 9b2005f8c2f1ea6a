#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "nitsche/sparse.hpp"

/// Vector kernels used by the conjugate-gradient solver. The scalar versions
/// are the reference; AVX2 versions are picked at run time when the CPU
/// supports them. NITSCHE_KERNELS=scalar|avx2 overrides the choice.
namespace nitsche::kernels {

enum class Backend { Scalar, Avx2 };

struct Table {
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + a y
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  // z = x .* y
  void (*hadamard)(const double* x, const double* y, double* z, std::size_t n);
  // y = A x for a CSR matrix with n rows
  void (*spmv)(int n, const int* row_ptr, const int* col, const double* val, const double* x, double* y);
  // y = A x, returns x'y
  double (*spmv_dot)(int n, const int* row_ptr, const int* col, const double* val, const double* x, double* y);
  // One pass of the CG update: x += a p, r -= a q, z = d .* r; returns
  // {r'z, r'r, x'(b + r)} for the updated vectors.
  std::array<double, 3> (*cg_update)(double a, const double* p, const double* q, const double* d, const double* b,
                                     double* x, double* r, double* z, std::size_t n);
};

bool available(Backend b);
/// Throws std::invalid_argument if the backend is not available.
const Table& table(Backend b);
const char* name(Backend b);

/// The backend used by the free functions below.
Backend active();
void set_active(Backend b);

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double a, std::span<double> y);
void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double spmv_dot(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
std::array<double, 3> cg_update(double a, std::span<const double> p, std::span<const double> q,
                                std::span<const double> d, std::span<const double> b, std::span<double> x,
                                std::span<double> r, std::span<double> z);

namespace detail {
extern const Table scalar_table;
#if defined(NITSCHE_HAVE_AVX2)
extern const Table avx2_table;
#endif
}  // namespace detail

}  // namespace nitsche::kernels
