#include <cmath>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>

#include "aircrew/milp.hpp"

namespace aircrew::milp {

const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::NodeLimit: return "node_limit";
  }
  return "?";
}

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  double bound;
  long seq;
  std::vector<std::pair<int, double>> fixes;  // (binary variable, fixed value)
  std::shared_ptr<const Basis> warm;          // parent's optimal basis
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

// Objective of `x` when it is a binary-integral, bound- and row-feasible point of `lp`.
std::optional<double> feasible_objective(const LinearProgram& lp, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != lp.num_vars()) return std::nullopt;
  double obj = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    const auto& v = lp.var(j);
    if (x[j] < v.lo - kIntTol || x[j] > v.hi + kIntTol) return std::nullopt;
    if (v.binary && x[j] != 0.0 && x[j] != 1.0) return std::nullopt;
    obj += v.cost * x[j];
  }
  for (const auto& r : lp.rows()) {
    double lhs = 0.0;
    for (auto [j, a] : r.coeffs) lhs += a * x[j];
    const double tol = 1e-7 * (1.0 + std::abs(r.rhs));
    if ((r.rel != Relation::GreaterEq && lhs > r.rhs + tol) || (r.rel != Relation::LessEq && lhs < r.rhs - tol))
      return std::nullopt;
  }
  return obj;
}

}  // namespace

MipResult solve_mip(const LinearProgram& lp, const MipOptions& opts) {
  lp.validate();
  MipResult res;
  if (!opts.incumbent.empty()) {
    if (auto obj = feasible_objective(lp, opts.incumbent)) {
      res.has_incumbent = true;
      res.objective = *obj;
      res.values = opts.incumbent;
    }
  }
  LinearProgram work = lp;
  std::vector<int> binaries;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.var(j).binary) binaries.push_back(j);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> dive;  // the 1-branch of the last node, processed next
  long seq = 0;
  open.push({-kInf, seq++, {}, nullptr});

  // With integral costs on binaries only, a node must beat the incumbent by a whole unit.
  bool integral = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    const auto& v = lp.var(j);
    if (v.binary ? std::abs(v.cost - std::round(v.cost)) > 1e-9 : v.cost != 0.0) integral = false;
  }
  // Smallest objective a node bound must stay under to remain interesting.
  auto cutoff = [&] {
    const double eps = 1e-9 * (1.0 + std::abs(res.objective));
    return integral ? res.objective - 1.0 + 1e-6 : res.objective - eps;
  };
  auto prunable = [&](double bound) { return res.has_incumbent && bound >= cutoff(); };

  while (dive || !open.empty()) {
    if (opts.node_limit > 0 && res.nodes >= opts.node_limit) break;
    Node node;
    if (dive) {
      node = std::move(*dive);
      dive.reset();
    } else {
      node = open.top();
      open.pop();
    }
    if (prunable(node.bound)) continue;
    ++res.nodes;

    for (int j : binaries) {
      work.var(j).lo = lp.var(j).lo;
      work.var(j).hi = lp.var(j).hi;
    }
    for (auto [j, v] : node.fixes) work.var(j).lo = work.var(j).hi = v;

    const LpSolution sol = node.warm ? solve_lp(work, opts.lp, *node.warm) : solve_lp(work, opts.lp);
    if (sol.status == LpStatus::Infeasible) continue;
    if (sol.status == LpStatus::Unbounded) throw std::invalid_argument("MIP relaxation is unbounded");
    if (sol.status == LpStatus::IterationLimit) throw std::runtime_error("LP iteration limit reached inside branch and bound");
    if (prunable(sol.objective)) continue;

    // Binaries whose reduced cost exceeds the remaining gap keep their bound in the subtree.
    std::vector<std::pair<int, double>> fixes = std::move(node.fixes);
    if (opts.reduced_cost_fixing && res.has_incumbent) {
      const double slack = cutoff() - sol.objective;
      for (int j : binaries) {
        if (work.var(j).lo == work.var(j).hi) continue;
        const double d = sol.reduced_costs[j];
        if (sol.primal[j] <= kIntTol && d > slack) fixes.emplace_back(j, 0.0);
        else if (sol.primal[j] >= 1.0 - kIntTol && -d > slack) fixes.emplace_back(j, 1.0);
      }
    }

    bool fractional = false;
    for (int j : binaries) fractional = fractional || std::abs(sol.primal[j] - std::round(sol.primal[j])) > kIntTol;
    if (!fractional) {
      std::vector<double> x = sol.primal;
      for (int j : binaries) x[j] = std::round(x[j]);
      double obj = 0.0;
      for (int j = 0; j < lp.num_vars(); ++j) obj += lp.var(j).cost * x[j];
      if (!res.has_incumbent || obj < res.objective) {
        res.has_incumbent = true;
        res.objective = obj;
        res.values = std::move(x);
      }
      continue;
    }

    std::vector<std::vector<std::pair<int, double>>> children;
    if (opts.brancher) {
      for (const auto& zeros : opts.brancher(sol.primal)) {
        children.push_back(fixes);
        for (int j : zeros) children.back().emplace_back(j, 0.0);
      }
    }
    if (children.empty()) {
      // Largest fractional value: its 1-branch is the likeliest to lead to an integral point.
      int branch = -1;
      double largest = 0.0;
      for (int j : binaries) {
        const double x = sol.primal[j];
        if (std::abs(x - std::round(x)) <= kIntTol) continue;
        if (x > largest + 1e-12) {
          largest = x;
          branch = j;
        }
      }
      children = {fixes, fixes};
      children[0].emplace_back(branch, 1.0);
      children[1].emplace_back(branch, 0.0);
    }
    for (std::size_t c = 1; c < children.size(); ++c) open.push({sol.objective, seq++, std::move(children[c]), sol.basis});
    dive = Node{sol.objective, seq++, std::move(children[0]), sol.basis};
  }
  if (dive) open.push(std::move(*dive));

  double open_bound = kInf;
  bool pending = false;
  while (!open.empty()) {
    if (!prunable(open.top().bound)) {
      open_bound = std::min(open_bound, open.top().bound);
      pending = true;
    }
    open.pop();
  }
  if (pending) {
    res.status = MipStatus::NodeLimit;
    res.best_bound = res.has_incumbent ? std::min(open_bound, res.objective) : open_bound;
  } else if (res.has_incumbent) {
    res.status = MipStatus::Optimal;
    res.best_bound = res.objective;
  } else {
    res.status = MipStatus::Infeasible;
    res.best_bound = kInf;
  }
  return res;
}

}  // namespace aircrew::milp
