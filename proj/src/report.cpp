#include "nitsche/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace nitsche {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string order_cell(const std::vector<double>& o, std::size_t row, const char* f) {
  if (row == 0 || std::isnan(o[row - 1])) return "";
  return fmt(f, o[row - 1]);
}

std::string size_label(const ErrorTriple& r, bool by_dof) {
  if (by_dof) return std::to_string(r.ndofs);
  const double inv = 1.0 / r.h;
  if (std::abs(inv - std::round(inv)) < 1e-9 * inv) return "1/" + std::to_string(static_cast<long>(std::round(inv)));
  return fmt("%.4g", r.h);
}

}  // namespace

ConvergenceReport make_report(std::vector<ErrorTriple> rows, bool by_dof) {
  ConvergenceReport rep;
  rep.rows = std::move(rows);
  rep.by_dof = by_dof;
  std::vector<double> de, die, dre, size;
  for (const auto& r : rep.rows) {
    de.push_back(r.De);
    die.push_back(r.Die);
    dre.push_back(r.Dre);
    size.push_back(by_dof ? static_cast<double>(r.ndofs) : r.h);
  }
  const EocMode mode = by_dof ? EocMode::ByDof : EocMode::ByH;
  if (rep.rows.size() >= 2) {
    rep.order_De = eoc(de, size, mode);
    rep.order_Die = eoc(die, size, mode);
    rep.order_Dre = eoc(dre, size, mode);
  }
  return rep;
}

void write_csv(const ConvergenceReport& rep, std::ostream& out) {
  out << "level,h_or_dof,De,order,Die,order,Dre,order\n";
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    out << k << ',' << (rep.by_dof ? std::to_string(r.ndofs) : fmt("%.10g", r.h)) << ',' << fmt("%.6e", r.De)
        << ',' << order_cell(rep.order_De, k, "%.4f") << ',' << fmt("%.6e", r.Die) << ','
        << order_cell(rep.order_Die, k, "%.4f") << ',' << fmt("%.6e", r.Dre) << ','
        << order_cell(rep.order_Dre, k, "%.4f") << '\n';
  }
}

void write_table(const ConvergenceReport& rep, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%10s  %10s %6s  %10s %6s  %10s %6s\n", rep.by_dof ? "DOF" : "h", "De", "order",
                "Die", "order", "Dre", "order");
  out << line;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    auto cell = [&](const std::vector<double>& o) {
      const std::string s = order_cell(o, k, "%.2f");
      return s.empty() ? std::string("--") : s;
    };
    std::snprintf(line, sizeof line, "%10s  %10.2e %6s  %10.2e %6s  %10.2e %6s\n", size_label(r, rep.by_dof).c_str(),
                  r.De, cell(rep.order_De).c_str(), r.Die, cell(rep.order_Die).c_str(), r.Dre,
                  cell(rep.order_Dre).c_str());
    out << line;
  }
}

}  // namespace nitsche
