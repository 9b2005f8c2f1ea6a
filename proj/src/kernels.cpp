#include "nitsche/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace nitsche::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(NITSCHE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return has;
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("NITSCHE_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool available(Backend b) { return b == Backend::Scalar || cpu_has_avx2(); }

const Table& table(Backend b) {
  if (b == Backend::Scalar) return detail::scalar_table;
#if defined(NITSCHE_HAVE_AVX2)
  if (cpu_has_avx2()) return detail::avx2_table;
#endif
  throw std::invalid_argument("AVX2 kernels are not available on this machine");
}

const char* name(Backend b) { return b == Backend::Scalar ? "scalar" : "avx2"; }

Backend active() { return current().load(); }

void set_active(Backend b) {
  table(b);  // validates
  current().store(b);
}

double dot(std::span<const double> x, std::span<const double> y) {
  return table(active()).dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  table(active()).axpy(a, x.data(), y.data(), x.size());
}

void xpay(std::span<const double> x, double a, std::span<double> y) {
  table(active()).xpay(x.data(), a, y.data(), x.size());
}

void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  table(active()).hadamard(x.data(), y.data(), z.data(), x.size());
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  table(active()).spmv(a.n, a.row_ptr.data(), a.col.data(), a.val.data(), x.data(), y.data());
}

double spmv_dot(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  return table(active()).spmv_dot(a.n, a.row_ptr.data(), a.col.data(), a.val.data(), x.data(), y.data());
}

std::array<double, 3> cg_update(double a, std::span<const double> p, std::span<const double> q,
                                std::span<const double> d, std::span<const double> b, std::span<double> x,
                                std::span<double> r, std::span<double> z) {
  return table(active()).cg_update(a, p.data(), q.data(), d.data(), b.data(), x.data(), r.data(), z.data(),
                                   x.size());
}

}  // namespace nitsche::kernels
