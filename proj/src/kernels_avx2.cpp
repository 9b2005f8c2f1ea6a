#include <immintrin.h>

#include "nitsche/kernels.hpp"

namespace nitsche::kernels::detail {
namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void hadamard_avx2(const double* x, const double* y, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void spmv_avx2(int n, const int* row_ptr, const int* col, const double* val, const double* x, double* y) {
  for (int r = 0; r < n; ++r) {
    int k = row_ptr[r];
    const int end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      // Plain loads beat the gather instruction on the memory-bound rows here.
      const __m256d xv = _mm256_set_pd(x[col[k + 3]], x[col[k + 2]], x[col[k + 1]], x[col[k]]);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

double spmv_dot_avx2(int n, const int* row_ptr, const int* col, const double* val, const double* x, double* y) {
  double d = 0.0;
  for (int r = 0; r < n; ++r) {
    int k = row_ptr[r];
    const int end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m256d xv = _mm256_set_pd(x[col[k + 3]], x[col[k + 2]], x[col[k + 1]], x[col[k]]);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += val[k] * x[col[k]];
    y[r] = s;
    d += x[r] * s;
  }
  return d;
}

std::array<double, 3> cg_update_avx2(double a, const double* p, const double* q, const double* d, const double* b,
                                     double* x, double* r, double* z, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  __m256d rz = _mm256_setzero_pd(), rr = _mm256_setzero_pd(), xbr = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_fmadd_pd(va, _mm256_loadu_pd(p + i), _mm256_loadu_pd(x + i));
    const __m256d rv = _mm256_fnmadd_pd(va, _mm256_loadu_pd(q + i), _mm256_loadu_pd(r + i));
    const __m256d zv = _mm256_mul_pd(_mm256_loadu_pd(d + i), rv);
    _mm256_storeu_pd(x + i, xv);
    _mm256_storeu_pd(r + i, rv);
    _mm256_storeu_pd(z + i, zv);
    rz = _mm256_fmadd_pd(rv, zv, rz);
    rr = _mm256_fmadd_pd(rv, rv, rr);
    xbr = _mm256_fmadd_pd(xv, _mm256_add_pd(_mm256_loadu_pd(b + i), rv), xbr);
  }
  std::array<double, 3> out{hsum(rz), hsum(rr), hsum(xbr)};
  for (; i < n; ++i) {
    x[i] += a * p[i];
    r[i] -= a * q[i];
    z[i] = d[i] * r[i];
    out[0] += r[i] * z[i];
    out[1] += r[i] * r[i];
    out[2] += x[i] * (b[i] + r[i]);
  }
  return out;
}

}  // namespace

const Table avx2_table{dot_avx2,  axpy_avx2,     xpay_avx2,     hadamard_avx2,
                       spmv_avx2, spmv_dot_avx2, cg_update_avx2};

}  // namespace nitsche::kernels::detail
