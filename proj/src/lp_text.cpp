#include <cmath>
#include <ostream>

#include "aircrew/milp.hpp"

namespace aircrew::milp {

namespace {

std::string var_name(const LinearProgram& lp, int j) {
  const std::string& n = lp.var(j).name;
  return n.empty() ? "x" + std::to_string(j) : n;
}

void write_term(std::ostream& out, double a, const std::string& name, bool first) {
  if (a < 0) out << (first ? "- " : " - ");
  else if (!first) out << " + ";
  if (std::abs(a) != 1.0) out << std::abs(a) << ' ';
  out << name;
}

}  // namespace

void write_lp_text(const LinearProgram& lp, std::ostream& out) {
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.var(j).cost == 0.0) continue;
    out << ' ';
    write_term(out, lp.var(j).cost, var_name(lp, j), first);
    first = false;
  }
  if (first) out << " 0";
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& r = lp.rows()[i];
    out << ' ' << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ": ";
    first = true;
    for (auto [j, a] : r.coeffs) {
      write_term(out, a, var_name(lp, j), first);
      first = false;
    }
    if (first) out << '0';
    out << (r.rel == Relation::LessEq ? " <= " : r.rel == Relation::Equal ? " = " : " >= ") << r.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const Variable& v = lp.var(j);
    if (v.binary) continue;
    out << ' ';
    if (std::isfinite(v.lo)) out << v.lo;
    else out << "-inf";
    out << " <= " << var_name(lp, j) << " <= ";
    if (std::isfinite(v.hi)) out << v.hi;
    else out << "+inf";
    out << '\n';
  }
  out << "Binary\n";
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.var(j).binary) out << ' ' << var_name(lp, j) << '\n';
  out << "End\n";
}

}  // namespace aircrew::milp
