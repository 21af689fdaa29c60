#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "aircrew/pairing.hpp"

namespace aircrew {

const char* to_string(CrewPairingStatus s) {
  switch (s) {
    case CrewPairingStatus::Optimal: return "optimal";
    case CrewPairingStatus::Feasible: return "feasible";
    case CrewPairingStatus::Infeasible: return "infeasible";
    case CrewPairingStatus::LimitReached: return "limit_reached";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <class F>
void for_each_window(int n, int jobs, F&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int t = 0; t < std::min(jobs, n); ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Ryan-Foster branching on the cover rows: two legs whose joint coverage is fractional.
// One child drops the columns that separate them, the other the columns holding both.
std::function<std::vector<std::vector<int>>(const std::vector<double>&)> leg_pair_brancher(
    const std::vector<Pairing>& pool, const MasterModel& model, int num_legs) {
  std::vector<std::vector<int>> cols(model.lp.num_vars());
  for (int j = 0; j < model.num_pool; ++j) {
    cols[j] = pool[j].legs;
    std::sort(cols[j].begin(), cols[j].end());
  }
  for (int l = 0; l < num_legs; ++l) cols[model.num_pool + l] = {l};
  return [cols = std::move(cols)](const std::vector<double>& x) -> std::vector<std::vector<int>> {
    std::map<std::pair<int, int>, double> together;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (x[j] <= 1e-9) continue;
      const auto& c = cols[j];
      for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b) together[{c[a], c[b]}] += x[j];
    }
    std::pair<int, int> best{-1, -1};
    double best_dist = 1.0, best_value = 0.0;
    for (const auto& [rs, v] : together) {
      if (v <= 1e-6 || v >= 1.0 - 1e-6) continue;
      if (std::abs(v - 0.5) < best_dist - 1e-12) {
        best_dist = std::abs(v - 0.5);
        best = rs;
        best_value = v;
      }
    }
    if (best.first < 0) return {};
    std::vector<int> separate, both;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const bool r = std::binary_search(cols[j].begin(), cols[j].end(), best.first);
      const bool s = std::binary_search(cols[j].begin(), cols[j].end(), best.second);
      if (r && s) both.push_back(static_cast<int>(j));
      else if (r || s) separate.push_back(static_cast<int>(j));
    }
    if (best_value >= 0.5) return {separate, both};
    return {both, separate};
  };
}

std::vector<int> legs_of_path(const PairingNetwork& net, const std::vector<int>& arcs) {
  std::vector<int> legs;
  for (int a : arcs)
    if (net.arc_info[a].kind != PricingArcKind::End) legs.push_back(net.arc_info[a].leg);
  return legs;
}

}  // namespace

PricingEngine::PricingEngine(const ProblemInstance& inst, const std::vector<Connection>& connections,
                             PricingOptions opts)
    : inst_(inst), connections_(connections), index_(index_connections(connections)), opts_(opts) {}

void PricingEngine::prepare(const PricingDuals& duals) {
  const int windows = 7;
  if (!built_) {
    nets_.resize(windows);
    states_.resize(windows);
    bounds_.resize(windows);
    for_each_window(windows, opts_.jobs, [&](int w) {
      nets_[w] = build_pricing_network(inst_, connections_, w, &duals);
      const PairingAlgebra alg = make_algebra(inst_.rules, duals);
      const int kappa = opts_.kappa.value_or(rcsp::auto_kappa(nets_[w].graph.num_vertices()));
      states_[w] = rcsp::build_state_graph(nets_[w].graph, alg, kappa);
      bounds_[w] = rcsp::compute_bounds(states_[w], nets_[w].graph, alg);
    });
    for (const auto& s : states_) stats_.bound_build_ms += s.build_ms;
    built_ = true;
    return;
  }
  for_each_window(windows, opts_.jobs, [&](int w) {
    set_network_duals(nets_[w], inst_, connections_, duals);
    bounds_[w] = rcsp::update_bounds(states_[w], nets_[w].graph, make_algebra(inst_.rules, duals));
  });
}

std::vector<int> PricingEngine::kappas() const {
  std::vector<int> k;
  for (const auto& s : states_) k.push_back(s.kappa);
  return k;
}

std::vector<PricedColumn> PricingEngine::best(const PricingDuals& duals) {
  prepare(duals);
  const int windows = static_cast<int>(nets_.size());
  const PairingAlgebra alg = make_algebra(inst_.rules, duals);
  std::vector<rcsp::SolveResult<PairingResource>> results(windows);
  rcsp::SolveOptions so;
  so.use_dom = opts_.use_dom;
  so.use_low = opts_.use_low;
  for_each_window(windows, opts_.jobs, [&](int w) { results[w] = rcsp::solve(nets_[w].graph, alg, bounds_[w], so); });

  std::vector<PricedColumn> out;
  std::set<std::vector<int>> seen;
  for (int w = 0; w < windows; ++w) {
    const auto& r = results[w];
    ++stats_.solves;
    stats_.paths_enumerated += r.stats.paths_enumerated;
    stats_.cut_dom += r.stats.cut_dom;
    stats_.cut_low += r.stats.cut_low;
    stats_.cut_infeasible += r.stats.cut_infeasible;
    stats_.search_ms += r.stats.runtime_ms;
    if (!r.path) continue;
    auto legs = legs_of_path(nets_[w], r.path->arcs);
    if (!seen.insert(legs).second) continue;
    out.push_back({make_pairing(inst_, connections_, index_, legs), r.cost});
  }
  return out;
}

std::vector<PricedColumn> PricingEngine::all_within(const PricingDuals& duals, double gap, bool& truncated) {
  prepare(duals);
  const int windows = static_cast<int>(nets_.size());
  const PairingAlgebra alg = make_algebra(inst_.rules, duals);
  std::vector<rcsp::EnumerateResult<PairingResource>> results(windows);
  for_each_window(windows, opts_.jobs, [&](int w) {
    results[w] = rcsp::enumerate_within(nets_[w].graph, alg, bounds_[w], gap, opts_.path_limit);
  });
  truncated = false;
  std::vector<PricedColumn> out;
  std::set<std::vector<int>> seen;
  for (int w = 0; w < windows; ++w) {
    const auto& r = results[w];
    truncated = truncated || r.truncated;
    stats_.search_ms += r.stats.runtime_ms;
    for (const auto& p : r.paths) {
      auto legs = legs_of_path(nets_[w], p.arcs);
      if (!seen.insert(legs).second) continue;
      out.push_back({make_pairing(inst_, connections_, index_, legs), p.cost});
    }
  }
  return out;
}

CrewPairingResult solve_crew_pairing(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                     const CrewPairingOptions& opts) {
  const auto t_start = Clock::now();
  CrewPairingResult res;
  auto& st = res.stats;
  PricingEngine engine(inst, connections, opts.pricing);
  std::set<std::vector<int>> in_pool;
  const std::vector<Cut>& cuts = opts.cuts;

  // Re-solves start from the previous optimal basis, widened by the columns priced in since.
  auto solve_relaxation = [&](const MasterModel& model, const milp::LpSolution* prev = nullptr, int prev_pool = 0) {
    const auto t0 = Clock::now();
    auto lp = prev && prev->basis
                  ? milp::solve_lp(model.lp, {},
                                   milp::with_inserted_columns(*prev->basis, prev_pool, model.num_pool - prev_pool))
                  : milp::solve_lp(model.lp);
    st.lp_ms += ms_since(t0);
    if (lp.status != milp::LpStatus::Optimal)
      throw std::runtime_error(std::string("restricted master LP ended with status ") + milp::to_string(lp.status));
    return lp;
  };
  auto add_column = [&](Pairing p) {
    if (!in_pool.insert(p.legs).second) return false;
    res.pool.push_back(std::move(p));
    return true;
  };

  MasterModel model = build_master(res.pool, inst, cuts);
  milp::LpSolution lp = solve_relaxation(model);
  PricingDuals duals;
  while (true) {
    st.lp_values.push_back(lp.objective);
    duals = pricing_duals(inst, connections, cuts, lp, model);
    if (st.cg_iterations >= opts.max_cg_iterations) break;
    ++st.cg_iterations;
    const auto t0 = Clock::now();
    auto cols = engine.best(duals);
    st.pricing_ms += ms_since(t0);
    int added = 0;
    for (auto& c : cols) {
      st.max_rc_error = std::max(st.max_rc_error, std::abs(c.reduced_cost - reduced_cost(c.pairing, inst, cuts, lp, model)));
      if (c.reduced_cost < -opts.rc_tolerance && add_column(std::move(c.pairing))) ++added;
    }
    st.columns_generated += added;
    if (added == 0) break;
    const int prev_pool = model.num_pool;
    model = build_master(res.pool, inst, cuts);
    lp = solve_relaxation(model, &lp, prev_pool);
  }
  res.c_lb = lp.objective;
  if (opts.lp_only) {
    st.pricing = engine.stats();
    st.kappas = engine.kappas();
    res.status = CrewPairingStatus::LimitReached;
    res.c_ub = milp::kInf;
    st.total_ms = ms_since(t_start);
    return res;
  }
  const MasterModel root_model = model;
  const milp::LpSolution root_lp = lp;
  const PricingDuals root_duals = duals;

  // Price-and-dive for a first cover: fix the pool column with the largest fractional value
  // to one and restore LP optimality by column generation, until the master is integral.
  std::vector<double> incumbent;
  int incumbent_pool = 0;
  if (opts.dive) {
    std::vector<int> fixed;
    MasterModel dm = model;
    milp::LpSolution dlp = lp;
    for (int fixes = 0; fixes <= static_cast<int>(inst.legs.size()); ++fixes) {
      int pick = -1;
      bool integral = true;
      for (int j = 0; j < dm.lp.num_vars(); ++j) {
        const double x = dlp.primal[j];
        if (std::abs(x - std::round(x)) <= 1e-6) continue;
        integral = false;
        if (j < dm.num_pool && (pick < 0 || x > dlp.primal[pick] + 1e-12)) pick = j;
      }
      if (integral) {
        incumbent.resize(dlp.primal.size());
        std::transform(dlp.primal.begin(), dlp.primal.end(), incumbent.begin(), [](double x) { return std::round(x); });
        incumbent_pool = dm.num_pool;
        break;
      }
      if (pick < 0) break;
      fixed.push_back(pick);
      bool ok = true;
      for (int round = 0; round < opts.max_cg_iterations; ++round) {
        const int prev_pool = dm.num_pool;
        dm = build_master(res.pool, inst, cuts);
        for (int f : fixed) dm.lp.var(f).lo = 1.0;
        const auto t0 = Clock::now();
        dlp = dlp.basis ? milp::solve_lp(dm.lp, {},
                                         milp::with_inserted_columns(*dlp.basis, prev_pool, dm.num_pool - prev_pool))
                        : milp::solve_lp(dm.lp);
        st.lp_ms += ms_since(t0);
        if (dlp.status != milp::LpStatus::Optimal) {
          ok = false;
          break;
        }
        ++st.dive_iterations;
        const auto d = pricing_duals(inst, connections, cuts, dlp, dm);
        const auto t1 = Clock::now();
        auto cols = engine.best(d);
        st.pricing_ms += ms_since(t1);
        int added = 0;
        for (auto& c : cols) {
          st.max_rc_error = std::max(st.max_rc_error, std::abs(c.reduced_cost - reduced_cost(c.pairing, inst, cuts, dlp, dm)));
          if (c.reduced_cost < -opts.rc_tolerance && add_column(std::move(c.pairing))) ++added;
        }
        st.columns_generated += added;
        if (added == 0) break;
      }
      if (!ok) break;
    }
  }

  // Pool columns keep their indices; artificials sit behind the pool.
  auto remap = [&](const std::vector<double>& values, int old_pool, const MasterModel& to) {
    if (values.empty()) return std::vector<double>{};
    std::vector<double> x(values.begin(), values.begin() + old_pool);
    x.resize(to.lp.num_vars(), 0.0);
    for (int j = old_pool; j < static_cast<int>(values.size()); ++j) x[to.num_pool + (j - old_pool)] = values[j];
    return x;
  };

  milp::MipOptions mo;
  mo.node_limit = opts.upper_bound_nodes;
  if (opts.node_limit > 0) mo.node_limit = mo.node_limit > 0 ? std::min(mo.node_limit, opts.node_limit) : opts.node_limit;
  model = build_master(res.pool, inst, cuts);
  mo.incumbent = remap(incumbent, incumbent_pool, model);
  mo.brancher = leg_pair_brancher(res.pool, model, static_cast<int>(inst.legs.size()));
  auto t0 = Clock::now();
  milp::MipResult mip = milp::solve_mip(model.lp, mo);
  st.mip_ms += ms_since(t0);
  st.mip_nodes += mip.nodes;
  res.c_ub = mip.has_incumbent ? mip.objective : milp::kInf;

  if (mip.has_incumbent) {
    // Column completion: every column whose root reduced cost is within the integrality gap.
    t0 = Clock::now();
    bool truncated = false;
    auto cols = engine.all_within(root_duals, res.c_ub - res.c_lb + 1e-6, truncated);
    st.pricing_ms += ms_since(t0);
    res.completion_truncated = truncated;
    for (auto& c : cols) {
      st.max_rc_error =
          std::max(st.max_rc_error, std::abs(c.reduced_cost - reduced_cost(c.pairing, inst, cuts, root_lp, root_model)));
      if (add_column(std::move(c.pairing))) ++st.completion_columns;
    }
    // The final model is solved exactly (up to the node limit) even when nothing was
    // added, since the upper-bound MIP may have stopped early.
    const int old_pool = model.num_pool;
    model = build_master(res.pool, inst, cuts);
    mo.node_limit = opts.node_limit;
    mo.incumbent = remap(mip.values, old_pool, model);
    mo.brancher = leg_pair_brancher(res.pool, model, static_cast<int>(inst.legs.size()));
    t0 = Clock::now();
    mip = milp::solve_mip(model.lp, mo);
    st.mip_ms += ms_since(t0);
    st.mip_nodes += mip.nodes;
  }
  st.pricing = engine.stats();
  st.kappas = engine.kappas();

  if (!mip.has_incumbent) {
    res.status = mip.status == milp::MipStatus::NodeLimit ? CrewPairingStatus::LimitReached : CrewPairingStatus::Infeasible;
    st.total_ms = ms_since(t_start);
    return res;
  }
  res.objective = mip.objective;
  for (int j = 0; j < model.num_pool; ++j)
    if (mip.values[j] > 0.5) res.pairings.push_back(res.pool[j]);
  for (int l = 0; l < static_cast<int>(inst.legs.size()); ++l)
    if (mip.values[model.num_pool + l] > 0.5) res.uncovered_legs.push_back(l);
  if (!res.uncovered_legs.empty()) {
    res.status = mip.status == milp::MipStatus::NodeLimit ? CrewPairingStatus::LimitReached : CrewPairingStatus::Infeasible;
    res.pairings.clear();
  } else if (mip.status == milp::MipStatus::NodeLimit) {
    res.status = CrewPairingStatus::LimitReached;
  } else if (res.completion_truncated) {
    res.status = CrewPairingStatus::Feasible;
  } else {
    res.status = CrewPairingStatus::Optimal;
    res.provably_optimal = true;
  }
  st.total_ms = ms_since(t_start);
  return res;
}

}  // namespace aircrew
