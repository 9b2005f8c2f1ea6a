#pragma once

#include <span>
#include <vector>

namespace nitsche {

/// Square matrix in compressed sparse row layout with sorted column indices.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }
  /// Position of (i, j) in `val`, or -1 when it is not stored.
  int find(int i, int j) const;
  /// Adds v at (i, j); the entry must be in the pattern.
  void add(int i, int j, double v);
  double at(int i, int j) const;
  std::vector<double> diagonal() const;
};

/// Collects dense element blocks and produces the union pattern.
class PatternBuilder {
 public:
  explicit PatternBuilder(int n) : rows_(n) {}
  void add_block(std::span<const int> dofs);
  /// Pattern with zero values.
  CsrMatrix build() const;

 private:
  std::vector<std::vector<int>> rows_;
};

struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  int n() const { return matrix.n; }
};

/// y = A x, serial reference.
void multiply(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

/// max |a_ij - a_ji| over stored entries (structurally symmetric matrices).
double max_asymmetry(const CsrMatrix& a);
double max_abs(const CsrMatrix& a);

/// Symmetric elimination of the listed DOFs: the lift -A[:,d] g_d moves to the
/// right-hand side, row and column d are zeroed, the diagonal set to 1 and
/// rhs[d] = g_d.
void apply_dirichlet(SparseSystem& sys, std::span<const int> dofs, std::span<const double> values);

}  // namespace nitsche
