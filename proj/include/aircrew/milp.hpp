#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <functional>
#include <memory>
#include <vector>

namespace aircrew::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Equal, GreaterEq };

struct Variable {
  double lo = 0.0;
  double hi = kInf;
  double cost = 0.0;
  bool binary = false;
  std::string name;
};

struct Row {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
  std::string name;
};

/// Minimisation model: min c'x  s.t.  rows, lo <= x <= hi.
class LinearProgram {
 public:
  int add_variable(double lo, double hi, double cost, std::string name = {}, bool binary = false);
  int add_binary(double cost, std::string name = {}) { return add_variable(0.0, 1.0, cost, std::move(name), true); }
  int add_row(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs, std::string name = {});

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  Variable& var(int j) { return vars_[j]; }
  const Variable& var(int j) const { return vars_[j]; }
  Row& row(int i) { return rows_[i]; }

  /// Throws std::invalid_argument on non-finite data, lo > hi or out-of-range indices.
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
const char* to_string(LpStatus s);

struct LpOptions {
  double tol_feas = 1e-7;
  double tol_pivot = 1e-9;
  double tol_opt = 1e-10;      // relative to the magnitude of each pricing term
  int bland_after = 50;        // degenerate pivots before switching to Bland's rule
  int refactor_every = 100;
  long max_iterations = 0;     // 0 selects 50 * (rows + cols) + 10000
};

/// Simplex basis over the working columns [structural | slack per row | artificial per
/// row], kept for warm starts after bound changes or appended columns.
struct Basis {
  int num_vars = 0;                    // structural columns when the basis was taken
  std::vector<int> basic;              // working column per row
  std::vector<unsigned char> upper;    // per working column: nonbasic at its upper bound
  std::vector<double> artificial_sign;
};

/// Dual sign convention (minimisation): duals of <=-rows are <= 0, of >=-rows >= 0.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  double objective = 0.0;
  std::vector<double> duals;          // one per row
  std::vector<double> reduced_costs;  // one per variable
  long iterations = 0;
  std::shared_ptr<const Basis> basis;  // optimal basis
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// `b` for a program with `count` new columns inserted before structural column `position`;
/// the new columns are nonbasic at their lower bound.
Basis with_inserted_columns(const Basis& b, int position, int count);

/// Re-solve from `warm`, an optimal basis of the same rows and columns under possibly other
/// bounds. A dual feasible start runs the
/// dual simplex, a primal feasible one the primal simplex. Falls back to a cold start
/// whenever the warm path cannot certify its answer (singular basis, neither kind of
/// feasibility, stalling). Skips validation: meant for re-solves of a program that already
/// passed it.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts, const Basis& warm);

/// Lagrangian dual objective y'b + sum_j d_j * (active bound of x_j); equals the primal
/// objective at an optimal basis.
double dual_objective(const LinearProgram& lp, const LpSolution& sol);

/// Largest row violation of `x` (zero when feasible).
double max_row_violation(const LinearProgram& lp, const std::vector<double>& x);

enum class MipStatus { Optimal, Infeasible, NodeLimit };
const char* to_string(MipStatus s);

struct MipOptions {
  LpOptions lp;
  long node_limit = 0;  // 0 means unlimited
  std::vector<double> incumbent;  // optional starting solution, ignored unless feasible
  /// Optional problem-specific branching. Given the fractional LP point of a node, returns
  /// the variables to fix at zero in each child; the children must together keep every
  /// integral point of the node. The first child is explored next. An empty result falls
  /// back to branching on a single variable.
  std::function<std::vector<std::vector<int>>(const std::vector<double>& x)> brancher;
  /// Fixes binaries whose LP reduced cost alone would push a node past the incumbent.
  bool reduced_cost_fixing = true;
};

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = kInf;
  double best_bound = -kInf;
  long nodes = 0;

  double gap() const { return has_incumbent ? objective - best_bound : kInf; }
};

/// Branch and bound over the binary-marked variables. Branches on the fractional variable
/// with the largest value (lowest index on ties), dives into its 1-branch and backtracks
/// to the open node with the best bound.
MipResult solve_mip(const LinearProgram& lp, const MipOptions& opts = {});

/// Human-readable LP text dump, meant for cross-checking with external tools.
void write_lp_text(const LinearProgram& lp, std::ostream& out);

}  // namespace aircrew::milp
