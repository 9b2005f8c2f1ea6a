#pragma once

#include <iosfwd>
#include <vector>

#include "nitsche/analysis.hpp"

namespace nitsche {

struct ConvergenceReport {
  std::vector<ErrorTriple> rows;
  bool by_dof = false;
  /// Orders between consecutive rows; NaN marks an undefined order.
  std::vector<double> order_De, order_Die, order_Dre;
};

ConvergenceReport make_report(std::vector<ErrorTriple> rows, bool by_dof);

/// level,h_or_dof,De,order,Die,order,Dre,order
void write_csv(const ConvergenceReport& rep, std::ostream& out);
/// Aligned table with h shown as 1/N (or the DOF count) and "--" for the first order.
void write_table(const ConvergenceReport& rep, std::ostream& out);

}  // namespace nitsche
