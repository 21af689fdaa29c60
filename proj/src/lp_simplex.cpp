// Bounded-variable revised primal simplex with an explicit dense basis inverse.
//
// Column layout of the working problem: [structural | slack per row | artificial per row].
// Row i reads  a_i x + s_i = b_i  (<= rows),  a_i x - s_i = b_i  (>= rows, s_i >= 0), or
// a_i x + s_i = b_i with s_i fixed at zero (= rows).

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>

#include "aircrew/milp.hpp"

namespace aircrew::milp {

int LinearProgram::add_variable(double lo, double hi, double cost, std::string name, bool binary) {
  vars_.push_back({lo, hi, cost, binary, std::move(name)});
  return num_vars() - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs, std::string name) {
  rows_.push_back({std::move(coeffs), rel, rhs, std::move(name)});
  return num_rows() - 1;
}

void LinearProgram::validate() const {
  for (const auto& v : vars_) {
    if (std::isnan(v.lo) || std::isnan(v.hi) || v.lo > v.hi) throw std::invalid_argument("variable " + v.name + ": lo > hi");
    if (!std::isfinite(v.cost)) throw std::invalid_argument("variable " + v.name + ": non-finite cost");
    if (v.lo == -kInf && v.hi == kInf) throw std::invalid_argument("variable " + v.name + ": free variables unsupported");
    if (v.binary && (v.lo < 0.0 || v.hi > 1.0)) throw std::invalid_argument("binary " + v.name + " bounds outside [0,1]");
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("row " + r.name + ": non-finite rhs");
    for (auto [j, a] : r.coeffs) {
      if (j < 0 || j >= num_vars()) throw std::invalid_argument("row " + r.name + ": column index out of range");
      if (!std::isfinite(a)) throw std::invalid_argument("row " + r.name + ": non-finite coefficient");
    }
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

namespace {

enum class NonbasicAt : unsigned char { Lower, Upper, Basic };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opts) : lp_(lp), opts_(opts) {
    n_ = lp.num_vars();
    m_ = lp.num_rows();
    total_ = n_ + 2 * m_;
    col_start_.assign(n_ + 1, 0);
    for (const auto& r : lp.rows())
      for (auto [j, a] : r.coeffs) ++col_start_[j + 1];
    for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i)
      for (auto [j, a] : lp.rows()[i].coeffs) {
        col_row_[fill[j]] = i;
        col_val_[fill[j]++] = a;
      }

    lo_.resize(total_);
    hi_.resize(total_);
    x_.assign(total_, 0.0);
    state_.assign(total_, NonbasicAt::Lower);
    slack_sign_.assign(m_, 1.0);
    art_sign_.assign(m_, 1.0);
    b_.resize(m_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.var(j).lo;
      hi_[j] = lp.var(j).hi;
    }
    for (int i = 0; i < m_; ++i) {
      const Row& r = lp.rows()[i];
      b_[i] = r.rhs;
      slack_sign_[i] = r.rel == Relation::GreaterEq ? -1.0 : 1.0;
      lo_[n_ + i] = 0.0;
      hi_[n_ + i] = r.rel == Relation::Equal ? 0.0 : kInf;
      lo_[n_ + m_ + i] = 0.0;
      hi_[n_ + m_ + i] = kInf;
    }
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations : 50L * (m_ + n_) + 10000;
  }

  LpSolution run() {
    LpSolution sol;
    initial_basis();
    std::vector<double> phase1(total_, 0.0);
    for (int i = 0; i < m_; ++i) phase1[n_ + m_ + i] = 1.0;
    cost_ = phase1;
    LpStatus st = iterate();
    if (st == LpStatus::IterationLimit) return finish(sol, st);
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas += x_[n_ + m_ + i];
    double scale = 1.0;
    for (double v : b_) scale = std::max(scale, std::abs(v));
    if (infeas > opts_.tol_feas * scale) return finish(sol, LpStatus::Infeasible);

    for (int i = 0; i < m_; ++i) {
      const int a = n_ + m_ + i;
      hi_[a] = 0.0;
      if (state_[a] != NonbasicAt::Basic) x_[a] = 0.0;
    }
    drive_out_artificials();
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.var(j).cost;
    bland_ = false;
    degenerate_streak_ = 0;
    st = iterate();
    return finish(sol, st);
  }

  // Warm start from an earlier optimal basis; nullopt asks for a cold start.
  std::optional<LpSolution> run_warm(const Basis& w) {
    if (w.num_vars != n_ || static_cast<int>(w.basic.size()) != m_ || static_cast<int>(w.upper.size()) != total_ ||
        static_cast<int>(w.artificial_sign.size()) != m_)
      return std::nullopt;
    art_sign_ = w.artificial_sign;
    for (int i = 0; i < m_; ++i) hi_[n_ + m_ + i] = 0.0;
    for (int j = 0; j < total_; ++j) {
      const bool up = (w.upper[j] && std::isfinite(hi_[j])) || !std::isfinite(lo_[j]);
      state_[j] = up ? NonbasicAt::Upper : NonbasicAt::Lower;
      x_[j] = up ? hi_[j] : lo_[j];
    }
    basis_ = w.basic;
    for (int j : basis_) {
      if (j < 0 || j >= total_ || state_[j] == NonbasicAt::Basic) return std::nullopt;
      state_[j] = NonbasicAt::Basic;
    }
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.var(j).cost;
    try {
      refactor();
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
    LpSolution sol;
    if (dual_feasible()) {
      LpStatus st = dual_iterate();
      if (st == LpStatus::Infeasible) return finish(sol, st);
      if (st != LpStatus::Optimal) return std::nullopt;
    } else if (!primal_feasible()) {
      return std::nullopt;
    }
    const LpStatus st = iterate();
    if (st != LpStatus::Optimal && st != LpStatus::Unbounded) return std::nullopt;
    return finish(sol, st);
  }

 private:
  bool dual_feasible() {
    std::vector<double> y;
    compute_duals(y);
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == NonbasicAt::Basic || lo_[j] == hi_[j]) continue;
      auto [d, scale] = reduced_cost(j, y);
      const double tol = 1e-7 * scale;
      if ((state_[j] == NonbasicAt::Lower && d < -tol) || (state_[j] == NonbasicAt::Upper && d > tol)) return false;
    }
    return true;
  }

  bool primal_feasible() const {
    for (int bv : basis_) {
      if (x_[bv] < lo_[bv] - opts_.tol_feas * (1.0 + std::abs(lo_[bv]))) return false;
      if (x_[bv] > hi_[bv] + opts_.tol_feas * (1.0 + std::abs(hi_[bv]))) return false;
    }
    return true;
  }

  // Dual simplex with the textbook ratio test. Optimal means primal feasible; Infeasible
  // is reported only with a clear violation, anything doubtful is IterationLimit.
  LpStatus dual_iterate() {
    std::vector<double> y, alpha(m_);
    // Past roughly the price of a cold start the warm path is not worth it.
    const long limit = iterations_ + 4L * m_ + 100;
    int degenerate = 0;
    while (true) {
      if (iterations_ >= std::min(limit, max_iter_)) return LpStatus::IterationLimit;
      const bool bland = degenerate > opts_.bland_after;
      int r = -1;
      double worst = 0.0;
      bool raise = false;
      for (int k = 0; k < m_; ++k) {
        const int bv = basis_[k];
        const double below = lo_[bv] - x_[bv];
        const double above = x_[bv] - hi_[bv];
        const double tol = opts_.tol_feas * (1.0 + std::abs(below > 0 ? lo_[bv] : hi_[bv]));
        // Under Bland's rule the infeasible basic variable with the lowest index leaves.
        const bool better = bland ? (r < 0 || bv < basis_[r]) : false;
        if (below > tol && (bland ? better : below > worst)) {
          worst = below;
          r = k;
          raise = true;
        } else if (above > tol && (bland ? better : above > worst)) {
          worst = above;
          r = k;
          raise = false;
        }
      }
      if (r < 0) return LpStatus::Optimal;

      compute_duals(y);
      const double* rowr = &binv_[idx(r, 0)];
      int q = -1;
      double best_ratio = kInf, best_piv = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == NonbasicAt::Basic || lo_[j] == hi_[j]) continue;
        double arj = 0.0;
        for_column(j, [&](int i, double a) { arj += rowr[i] * a; });
        if (std::abs(arj) <= opts_.tol_pivot) continue;
        // x_p moves by -arj per unit of x_j.
        const bool lower = state_[j] == NonbasicAt::Lower;
        const bool helps = raise ? (lower ? arj < 0.0 : arj > 0.0) : (lower ? arj > 0.0 : arj < 0.0);
        if (!helps) continue;
        const double ratio = std::abs(reduced_cost(j, y).first) / std::abs(arj);
        const bool tie = ratio <= best_ratio + 1e-12;
        if (ratio < best_ratio - 1e-12 || (tie && !bland && std::abs(arj) > best_piv)) {
          best_ratio = ratio;
          best_piv = std::abs(arj);
          q = j;
        }
      }
      if (q < 0) return worst > 1e-6 ? LpStatus::Infeasible : LpStatus::IterationLimit;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_column(q, [&](int i, double a) {
        for (int k = 0; k < m_; ++k) alpha[k] += binv_[idx(k, i)] * a;
      });
      if (std::abs(alpha[r]) <= opts_.tol_pivot) return LpStatus::IterationLimit;
      degenerate = best_ratio <= 1e-12 ? degenerate + 1 : 0;
      const int out = basis_[r];
      x_[out] = raise ? lo_[out] : hi_[out];
      state_[out] = raise ? NonbasicAt::Lower : NonbasicAt::Upper;
      pivot(r, q, alpha);
      ++iterations_;
      if (++since_refactor_ >= opts_.refactor_every) {
        try {
          refactor();
        } catch (const std::runtime_error&) {
          return LpStatus::IterationLimit;
        }
      } else {
        recompute_basic_values();
      }
    }
  }

  // Column entry (row, value) iteration for any working column.
  template <class F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
    } else if (j < n_ + m_) {
      f(j - n_, slack_sign_[j - n_]);
    } else {
      f(j - n_ - m_, art_sign_[j - n_ - m_]);
    }
  }

  void initial_basis() {
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        state_[j] = NonbasicAt::Lower;
      } else {
        x_[j] = hi_[j];
        state_[j] = NonbasicAt::Upper;
      }
    }
    std::vector<double> resid = b_;
    for (int j = 0; j < n_; ++j)
      if (x_[j] != 0.0) for_column(j, [&](int i, double a) { resid[i] -= a * x_[j]; });
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const int a = n_ + m_ + i;
      const double sval = resid[i] * slack_sign_[i];
      if (sval >= 0.0 && sval <= hi_[s]) {
        basis_[i] = s;
        x_[s] = sval;
        state_[s] = NonbasicAt::Basic;
        state_[a] = NonbasicAt::Lower;
        x_[a] = 0.0;
      } else {
        art_sign_[i] = resid[i] >= 0.0 ? 1.0 : -1.0;
        basis_[i] = a;
        x_[a] = std::abs(resid[i]);
        state_[a] = NonbasicAt::Basic;
        state_[s] = NonbasicAt::Lower;
        x_[s] = 0.0;
      }
    }
    refactor();
  }

  // Gauss-Jordan inversion of the basis matrix with partial pivoting.
  void refactor() {
    std::vector<double> bm(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k) for_column(basis_[k], [&](int i, double a) { bm[idx(i, k)] = a; });
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = c;
      for (int r = c + 1; r < m_; ++r)
        if (std::abs(bm[idx(r, c)]) > std::abs(bm[idx(piv, c)])) piv = r;
      if (std::abs(bm[idx(piv, c)]) < 1e-14) throw std::runtime_error("singular basis");
      if (piv != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(bm[idx(piv, k)], bm[idx(c, k)]);
          std::swap(binv_[idx(piv, k)], binv_[idx(c, k)]);
        }
      }
      const double inv = 1.0 / bm[idx(c, c)];
      for (int k = 0; k < m_; ++k) {
        bm[idx(c, k)] *= inv;
        binv_[idx(c, k)] *= inv;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = bm[idx(r, c)];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          bm[idx(r, k)] -= f * bm[idx(c, k)];
          binv_[idx(r, k)] -= f * binv_[idx(c, k)];
        }
      }
    }
    // binv_ now maps row space to basis positions: x_B = binv_ * rhs.
    recompute_basic_values();
    since_refactor_ = 0;
  }

  void recompute_basic_values() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == NonbasicAt::Basic || x_[j] == 0.0) continue;
      for_column(j, [&](int i, double a) { rhs[i] -= a * x_[j]; });
    }
    for (int k = 0; k < m_; ++k) {
      double v = 0.0;
      for (int i = 0; i < m_; ++i) v += binv_[idx(k, i)] * rhs[i];
      x_[basis_[k]] = v;
    }
  }

  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * m_ + c; }

  void compute_duals(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      const double cb = cost_[basis_[k]];
      if (cb == 0.0) continue;
      for (int i = 0; i < m_; ++i) y[i] += cb * binv_[idx(k, i)];
    }
  }

  // Reduced cost of column j and the magnitude scale used for its tolerance.
  std::pair<double, double> reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost_[j];
    double scale = 1.0 + std::abs(cost_[j]);
    for_column(j, [&](int i, double a) {
      d -= y[i] * a;
      scale += std::abs(y[i] * a);
    });
    return {d, scale};
  }

  LpStatus iterate() {
    std::vector<double> y, alpha(m_);
    while (true) {
      if (iterations_ >= max_iter_) return LpStatus::IterationLimit;
      compute_duals(y);
      int q = -1;
      double best = 0.0;
      double dir = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == NonbasicAt::Basic || lo_[j] == hi_[j]) continue;
        auto [d, scale] = reduced_cost(j, y);
        const double tol = opts_.tol_opt * scale;
        double gain = 0.0;
        double dj = 0.0;
        if (state_[j] == NonbasicAt::Lower && d < -tol) {
          gain = -d;
          dj = 1.0;
        } else if (state_[j] == NonbasicAt::Upper && d > tol) {
          gain = d;
          dj = -1.0;
        } else {
          continue;
        }
        if (bland_) {
          q = j;
          dir = dj;
          break;
        }
        if (gain > best) {
          best = gain;
          q = j;
          dir = dj;
        }
      }
      if (q < 0) return LpStatus::Optimal;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_column(q, [&](int i, double a) {
        for (int k = 0; k < m_; ++k) alpha[k] += binv_[idx(k, i)] * a;
      });

      double t = hi_[q] - lo_[q];
      int leave = -1;
      double leave_piv = 0.0;
      for (int k = 0; k < m_; ++k) {
        const double delta = dir * alpha[k];
        if (std::abs(alpha[k]) <= opts_.tol_pivot) continue;
        const int bv = basis_[k];
        double lim;
        if (delta > 0.0) {
          if (!std::isfinite(lo_[bv])) continue;
          lim = (x_[bv] - lo_[bv]) / delta;
        } else {
          if (!std::isfinite(hi_[bv])) continue;
          lim = (hi_[bv] - x_[bv]) / -delta;
        }
        lim = std::max(lim, 0.0);
        bool take;
        if (lim < t - 1e-12) take = true;
        else if (lim > t + 1e-12) take = false;
        else if (leave < 0) take = true;  // prefer a basis change over a bound flip
        else take = bland_ ? bv < basis_[leave] : std::abs(alpha[k]) > leave_piv;
        if (take) {
          t = lim;
          leave = k;
          leave_piv = std::abs(alpha[k]);
        }
      }
      if (!std::isfinite(t)) return LpStatus::Unbounded;

      ++iterations_;
      if (t <= 1e-12) {
        if (++degenerate_streak_ > opts_.bland_after) bland_ = true;
      } else {
        degenerate_streak_ = 0;
        bland_ = false;
      }

      for (int k = 0; k < m_; ++k) x_[basis_[k]] -= t * dir * alpha[k];
      x_[q] += t * dir;

      if (leave < 0) {
        // Bound flip of the entering variable.
        if (dir > 0) {
          x_[q] = hi_[q];
          state_[q] = NonbasicAt::Upper;
        } else {
          x_[q] = lo_[q];
          state_[q] = NonbasicAt::Lower;
        }
        continue;
      }
      const int out = basis_[leave];
      if (dir * alpha[leave] > 0.0) {
        x_[out] = lo_[out];
        state_[out] = NonbasicAt::Lower;
      } else {
        x_[out] = hi_[out];
        state_[out] = NonbasicAt::Upper;
      }
      pivot(leave, q, alpha);
      if (++since_refactor_ >= opts_.refactor_every) refactor();
    }
  }

  void pivot(int r, int q, const std::vector<double>& alpha) {
    basis_[r] = q;
    state_[q] = NonbasicAt::Basic;
    const double inv = 1.0 / alpha[r];
    double* rowr = &binv_[idx(r, 0)];
    for (int i = 0; i < m_; ++i) rowr[i] *= inv;
    for (int k = 0; k < m_; ++k) {
      if (k == r || alpha[k] == 0.0) continue;
      const double f = alpha[k];
      double* rowk = &binv_[idx(k, 0)];
      for (int i = 0; i < m_; ++i) rowk[i] -= f * rowr[i];
    }
  }

  void drive_out_artificials() {
    std::vector<double> alpha(m_);
    for (int k = 0; k < m_; ++k) {
      if (basis_[k] < n_ + m_) continue;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == NonbasicAt::Basic) continue;
        double ak = 0.0;
        for_column(j, [&](int i, double a) { ak += binv_[idx(k, i)] * a; });
        if (std::abs(ak) <= 1e-7) continue;
        std::fill(alpha.begin(), alpha.end(), 0.0);
        for_column(j, [&](int i, double a) {
          for (int kk = 0; kk < m_; ++kk) alpha[kk] += binv_[idx(kk, i)] * a;
        });
        const int out = basis_[k];
        x_[out] = 0.0;
        state_[out] = NonbasicAt::Lower;
        pivot(k, j, alpha);
        break;
      }
    }
    refactor();
  }

  LpSolution finish(LpSolution& sol, LpStatus st) {
    sol.status = st;
    sol.iterations = iterations_;
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    if (st != LpStatus::Optimal) return sol;
    for (int j = 0; j < n_; ++j) sol.primal[j] = std::clamp(sol.primal[j], lo_[j], hi_[j]);
    std::vector<double> y;
    compute_duals(y);
    sol.duals = y;
    auto basis = std::make_shared<Basis>();
    basis->num_vars = n_;
    basis->basic = basis_;
    basis->upper.resize(total_);
    for (int j = 0; j < total_; ++j) basis->upper[j] = state_[j] == NonbasicAt::Upper;
    basis->artificial_sign = art_sign_;
    sol.basis = std::move(basis);
    sol.reduced_costs.resize(n_);
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] = reduced_cost(j, y).first;
      sol.objective += cost_[j] * sol.primal[j];
    }
    return sol;
  }

  const LinearProgram& lp_;
  LpOptions opts_;
  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> lo_, hi_, x_, cost_, b_, slack_sign_, art_sign_;
  std::vector<NonbasicAt> state_;
  std::vector<int> basis_;
  std::vector<double> binv_;
  long iterations_ = 0;
  long max_iter_ = 0;
  int since_refactor_ = 0;
  int degenerate_streak_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  lp.validate();
  Simplex s(lp, opts);
  return s.run();
}

Basis with_inserted_columns(const Basis& b, int position, int count) {
  if (position < 0 || position > b.num_vars || count < 0) throw std::invalid_argument("bad column insertion");
  Basis out;
  out.num_vars = b.num_vars + count;
  out.artificial_sign = b.artificial_sign;
  out.basic = b.basic;
  for (int& j : out.basic)
    if (j >= position) j += count;
  out.upper = b.upper;
  out.upper.insert(out.upper.begin() + position, count, 0);
  return out;
}

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts, const Basis& warm) {
  {
    Simplex s(lp, opts);
    if (auto sol = s.run_warm(warm)) return *sol;
  }
  Simplex s(lp, opts);
  return s.run();
}

double dual_objective(const LinearProgram& lp, const LpSolution& sol) {
  double obj = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) obj += sol.duals[i] * lp.rows()[i].rhs;
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double d = sol.reduced_costs[j];
    if (std::abs(d) <= 1e-9 * (1.0 + std::abs(lp.var(j).cost))) continue;
    const double bound = d > 0.0 ? lp.var(j).lo : lp.var(j).hi;
    if (std::isfinite(bound)) obj += d * bound;
    else return -kInf;
  }
  return obj;
}

double max_row_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& r : lp.rows()) {
    double act = 0.0;
    for (auto [j, a] : r.coeffs) act += a * x[j];
    double v = 0.0;
    switch (r.rel) {
      case Relation::LessEq: v = act - r.rhs; break;
      case Relation::GreaterEq: v = r.rhs - act; break;
      case Relation::Equal: v = std::abs(act - r.rhs); break;
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace aircrew::milp
