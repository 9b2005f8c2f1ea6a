#include "nitsche/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nitsche {

int CsrMatrix::find(int i, int j) const {
  const auto first = col.begin() + row_ptr[i];
  const auto last = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? static_cast<int>(it - col.begin()) : -1;
}

void CsrMatrix::add(int i, int j, double v) {
  const int k = find(i, j);
  if (k < 0) throw std::logic_error("entry (" + std::to_string(i) + "," + std::to_string(j) + ") not in pattern");
  val[k] += v;
}

double CsrMatrix::at(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : val[k];
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = at(i, i);
  return d;
}

void PatternBuilder::add_block(std::span<const int> dofs) {
  for (int i : dofs) {
    if (i < 0) continue;
    for (int j : dofs) {
      if (j >= 0) rows_[i].push_back(j);
    }
  }
}

CsrMatrix PatternBuilder::build() const {
  CsrMatrix a;
  a.n = static_cast<int>(rows_.size());
  a.row_ptr.assign(a.n + 1, 0);
  std::vector<int> scratch;
  for (int i = 0; i < a.n; ++i) {
    scratch = rows_[i];
    scratch.push_back(i);  // keep the diagonal even for isolated rows
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    a.col.insert(a.col.end(), scratch.begin(), scratch.end());
    a.row_ptr[i + 1] = static_cast<int>(a.col.size());
  }
  a.val.assign(a.col.size(), 0.0);
  return a;
}

void multiply(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  for (int i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

double max_asymmetry(const CsrMatrix& a) {
  double worst = 0.0;
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      worst = std::max(worst, std::abs(a.val[k] - a.at(a.col[k], i)));
    }
  }
  return worst;
}

double max_abs(const CsrMatrix& a) {
  double m = 0.0;
  for (double v : a.val) m = std::max(m, std::abs(v));
  return m;
}

void apply_dirichlet(SparseSystem& sys, std::span<const int> dofs, std::span<const double> values) {
  if (dofs.size() != values.size()) throw std::invalid_argument("apply_dirichlet: size mismatch");
  auto& a = sys.matrix;
  std::vector<double> g(a.n, 0.0);
  std::vector<char> fixed(a.n, 0);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (!std::isfinite(values[k])) throw std::invalid_argument("apply_dirichlet: non-finite boundary value");
    fixed[dofs[k]] = 1;
    g[dofs[k]] = values[k];
  }
  for (int i = 0; i < a.n; ++i) {
    if (fixed[i]) continue;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col[k];
      if (fixed[j]) {
        sys.rhs[i] -= a.val[k] * g[j];
        a.val[k] = 0.0;
      }
    }
  }
  for (int i = 0; i < a.n; ++i) {
    if (!fixed[i]) continue;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) a.val[k] = a.col[k] == i ? 1.0 : 0.0;
    sys.rhs[i] = g[i];
  }
}

}  // namespace nitsche
