#pragma once
// Resource constrained shortest paths over a lattice ordered monoid of resources.
//
// A resource algebra supplies: a Resource type, neutral(), combine(a, b) (associative,
// monotone), leq(a, b) (partial order), meet/join (glb/lub), cost(a) and infeasible(a),
// both non-decreasing. The engine enumerates o-d paths by increasing key, where the key
// of a partial path P ending at v is the best completed cost against the bound set B_v.
// A partial path that is already infeasible is dropped, so arc resources must never turn
// an infeasible prefix feasible again (no arc may carry a bottom-like absorbing element).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace aircrew::rcsp {

inline constexpr double kInfCost = std::numeric_limits<double>::infinity();

template <class A>
concept ResourceAlgebra = requires(const A& alg, const typename A::Resource& q) {
  { alg.neutral() } -> std::convertible_to<typename A::Resource>;
  { alg.combine(q, q) } -> std::convertible_to<typename A::Resource>;
  { alg.leq(q, q) } -> std::convertible_to<bool>;
  { alg.meet(q, q) } -> std::convertible_to<typename A::Resource>;
  { alg.join(q, q) } -> std::convertible_to<typename A::Resource>;
  { alg.cost(q) } -> std::convertible_to<double>;
  { alg.infeasible(q) } -> std::convertible_to<bool>;
};

/// Acyclic digraph with one resource per arc. Call finalize() after the last add_arc();
/// set_arc_resource() may be used afterwards without changing the topology.
template <class R>
class RcspGraph {
 public:
  struct Arc {
    int from;
    int to;
    R resource;
  };

  RcspGraph(int num_vertices, int origin, int destination)
      : n_(num_vertices), origin_(origin), destination_(destination) {
    if (origin < 0 || origin >= n_ || destination < 0 || destination >= n_)
      throw std::invalid_argument("origin/destination out of range");
  }

  int add_arc(int from, int to, R resource) {
    if (from < 0 || from >= n_ || to < 0 || to >= n_) throw std::invalid_argument("arc endpoint out of range");
    arcs_.push_back({from, to, std::move(resource)});
    finalized_ = false;
    ++topology_version_;
    return static_cast<int>(arcs_.size()) - 1;
  }

  void set_arc_resource(int a, R resource) { arcs_.at(a).resource = std::move(resource); }

  /// Computes a topological order (throws std::invalid_argument on a cycle) and prunes
  /// arcs lying on no origin-destination path.
  void finalize() {
    std::vector<int> indeg(n_, 0);
    std::vector<std::vector<int>> out_all(n_);
    for (int a = 0; a < num_arcs(); ++a) {
      ++indeg[arcs_[a].to];
      out_all[arcs_[a].from].push_back(a);
    }
    topo_.clear();
    std::queue<int> ready;
    for (int v = 0; v < n_; ++v)
      if (indeg[v] == 0) ready.push(v);
    while (!ready.empty()) {
      const int v = ready.front();
      ready.pop();
      topo_.push_back(v);
      for (int a : out_all[v])
        if (--indeg[arcs_[a].to] == 0) ready.push(arcs_[a].to);
    }
    if (static_cast<int>(topo_.size()) != n_) throw std::invalid_argument("graph contains a cycle");

    std::vector<char> fwd(n_, 0), bwd(n_, 0);
    fwd[origin_] = 1;
    for (int v : topo_)
      if (fwd[v])
        for (int a : out_all[v]) fwd[arcs_[a].to] = 1;
    bwd[destination_] = 1;
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it)
      for (int a : out_all[*it])
        if (bwd[arcs_[a].to]) bwd[*it] = 1;
    alive_.assign(num_arcs(), 0);
    out_.assign(n_, {});
    for (int a = 0; a < num_arcs(); ++a) {
      alive_[a] = fwd[arcs_[a].from] && bwd[arcs_[a].to];
      if (alive_[a]) out_[arcs_[a].from].push_back(a);
    }
    finalized_ = true;
  }

  void require_finalized() const {
    if (!finalized_) throw std::logic_error("RcspGraph::finalize() must be called before solving");
  }

  int num_vertices() const { return n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int origin() const { return origin_; }
  int destination() const { return destination_; }
  const Arc& arc(int a) const { return arcs_[a]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  bool alive(int a) const { return alive_[a]; }
  /// Outgoing arcs that lie on some origin-destination path.
  const std::vector<int>& out_arcs(int v) const { return out_[v]; }
  const std::vector<int>& topological_order() const { return topo_; }
  std::uint64_t topology_version() const { return topology_version_; }

 private:
  int n_;
  int origin_;
  int destination_;
  std::vector<Arc> arcs_;
  std::vector<char> alive_;
  std::vector<std::vector<int>> out_;
  std::vector<int> topo_;
  bool finalized_ = false;
  std::uint64_t topology_version_ = 0;
};

/// Rule of thumb for the number of bounds per vertex.
inline int auto_kappa(int num_vertices) {
  if (num_vertices < 100) return 1;
  if (num_vertices < 300) return 50;
  if (num_vertices < 1500) return 150;
  return 250;
}

/// Expanded graph whose states cluster the suffixes of each vertex; theta(state) = vertex.
struct StateGraph {
  int kappa = 1;
  std::uint64_t topology_version = 0;
  std::vector<int> state_vertex;                          // theta
  std::vector<std::vector<std::pair<int, int>>> state_out;  // (graph arc, successor state)
  std::vector<std::vector<int>> states_of;                // per graph vertex
  std::vector<int> order;                                 // successors before predecessors
  double build_ms = 0.0;

  int num_states() const { return static_cast<int>(state_vertex.size()); }
};

template <class R>
struct BoundSets {
  std::vector<R> state_bound;             // b_{v'} per state
  std::vector<std::vector<R>> per_vertex;  // B_v, in state order
};

namespace detail {

template <class A>
double merge_penalty(const A& alg, const typename A::Resource& a, const typename A::Resource& b,
                     const typename A::Resource& m) {
  double p = 0.0;
  if ((alg.infeasible(a) || alg.infeasible(b)) && !alg.infeasible(m)) p += 1.0;
  if constexpr (requires { alg.merge_penalty(a, b); }) p += alg.merge_penalty(a, b);
  return p;
}

inline double cost_loss(double ca, double cb, double cm) {
  const double lo = std::min(ca, cb);
  if (lo == cm) return 0.0;  // covers equal infinities
  return lo - cm;
}

}  // namespace detail

/// Builds the state graph backward: the candidates at v are (out-arc, successor state)
/// pairs, greedily merged (least penalty, then least cost loss of the meet, ties by
/// construction order) until at most kappa states remain. Beyond 2 kappa + 8 candidates
/// an online pass merges each surplus candidate into its best partner first.
template <ResourceAlgebra A>
StateGraph build_state_graph(const RcspGraph<typename A::Resource>& g, const A& alg, int kappa) {
  using R = typename A::Resource;
  g.require_finalized();
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  StateGraph sg;
  sg.kappa = kappa;
  sg.topology_version = g.topology_version();
  sg.states_of.assign(g.num_vertices(), {});
  std::vector<R> value;  // bound per state, used while building

  const int d = g.destination();
  sg.state_vertex.push_back(d);
  sg.state_out.emplace_back();
  sg.states_of[d].push_back(0);
  sg.order.push_back(0);
  value.push_back(alg.neutral());

  struct Cluster {
    R value;
    double cost;
    std::vector<std::pair<int, int>> members;
    bool active = true;
  };
  struct Partner {
    double penalty = kInfCost;
    double loss = kInfCost;
    int other = -1;
  };

  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int v = *it;
    if (v == d || g.out_arcs(v).empty()) continue;
    std::vector<Cluster> cl;
    for (int a : g.out_arcs(v)) {
      for (int s : sg.states_of[g.arc(a).to]) {
        R q = alg.combine(g.arc(a).resource, value[s]);
        const double c = alg.cost(q);
        cl.push_back({std::move(q), c, {{a, s}}, true});
      }
    }
    // Large candidate lists are first folded online, each candidate into its best partner
    // among the clusters kept so far, down to twice kappa; the exact greedy finishes.
    const std::size_t pre_limit = 2 * static_cast<std::size_t>(kappa) + 8;
    if (cl.size() > pre_limit) {
      std::vector<Cluster> kept;
      kept.reserve(pre_limit);
      for (auto& c : cl) {
        if (kept.size() < pre_limit) {
          kept.push_back(std::move(c));
          continue;
        }
        int bj = -1;
        double bp = kInfCost, bl = kInfCost;
        for (int j = 0; j < static_cast<int>(kept.size()); ++j) {
          const R m = alg.meet(kept[j].value, c.value);
          const double pen = detail::merge_penalty(alg, kept[j].value, c.value, m);
          const double loss = detail::cost_loss(kept[j].cost, c.cost, alg.cost(m));
          if (bj < 0 || std::tie(pen, loss) < std::tie(bp, bl)) {
            bj = j;
            bp = pen;
            bl = loss;
          }
        }
        kept[bj].value = alg.meet(kept[bj].value, c.value);
        kept[bj].cost = alg.cost(kept[bj].value);
        kept[bj].members.insert(kept[bj].members.end(), c.members.begin(), c.members.end());
      }
      cl = std::move(kept);
    }
    int active = static_cast<int>(cl.size());
    if (active > kappa) {
      const int n = active;
      auto better = [](double p1, double l1, int i1, int j1, double p2, double l2, int i2, int j2) {
        return std::tie(p1, l1, i1, j1) < std::tie(p2, l2, i2, j2);
      };
      auto evaluate = [&](int i, int j, double& pen, double& loss) {
        const R m = alg.meet(cl[i].value, cl[j].value);
        pen = detail::merge_penalty(alg, cl[i].value, cl[j].value, m);
        loss = detail::cost_loss(cl[i].cost, cl[j].cost, alg.cost(m));
      };
      std::vector<Partner> best(n);
      auto refresh = [&](int i) {
        best[i] = Partner{};
        for (int j = 0; j < n; ++j) {
          if (j == i || !cl[j].active) continue;
          double pen, loss;
          evaluate(i, j, pen, loss);
          const Partner& b = best[i];
          if (b.other < 0 ||
              better(pen, loss, std::min(i, j), std::max(i, j), b.penalty, b.loss, std::min(i, b.other),
                     std::max(i, b.other)))
            best[i] = {pen, loss, j};
        }
      };
      for (int i = 0; i < n; ++i) refresh(i);
      while (active > kappa) {
        int bi = -1;
        for (int i = 0; i < n; ++i) {
          if (!cl[i].active || best[i].other < 0) continue;
          if (bi < 0) {
            bi = i;
            continue;
          }
          const Partner& p = best[i];
          const Partner& q = best[bi];
          if (better(p.penalty, p.loss, std::min(i, p.other), std::max(i, p.other), q.penalty, q.loss,
                     std::min(bi, q.other), std::max(bi, q.other)))
            bi = i;
        }
        const int i = std::min(bi, best[bi].other);
        const int j = std::max(bi, best[bi].other);
        cl[i].value = alg.meet(cl[i].value, cl[j].value);
        cl[i].cost = alg.cost(cl[i].value);
        cl[i].members.insert(cl[i].members.end(), cl[j].members.begin(), cl[j].members.end());
        cl[j].active = false;
        cl[j].members.clear();
        --active;
        if (active <= kappa) break;
        refresh(i);
        for (int k = 0; k < n; ++k) {
          if (!cl[k].active || k == i) continue;
          if (best[k].other == i || best[k].other == j) {
            refresh(k);
            continue;
          }
          double pen, loss;
          evaluate(k, i, pen, loss);
          const Partner& b = best[k];
          if (better(pen, loss, std::min(k, i), std::max(k, i), b.penalty, b.loss, std::min(k, b.other),
                     std::max(k, b.other)))
            best[k] = {pen, loss, i};
        }
      }
    }
    for (auto& c : cl) {
      if (!c.active) continue;
      const int s = sg.num_states();
      sg.state_vertex.push_back(v);
      sg.state_out.push_back(std::move(c.members));
      sg.states_of[v].push_back(s);
      sg.order.push_back(s);
      value.push_back(std::move(c.value));
    }
  }
  sg.build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return sg;
}

/// b_{d'} = neutral; b_{v'} = meet over state arcs (v', u') of (q_a + b_{u'}).
template <ResourceAlgebra A>
BoundSets<typename A::Resource> compute_bounds(const StateGraph& sg, const RcspGraph<typename A::Resource>& g,
                                               const A& alg) {
  using R = typename A::Resource;
  BoundSets<R> bs;
  bs.state_bound.assign(sg.num_states(), alg.neutral());
  for (int s : sg.order) {
    const auto& out = sg.state_out[s];
    if (out.empty()) continue;
    R b = alg.combine(g.arc(out[0].first).resource, bs.state_bound[out[0].second]);
    for (std::size_t k = 1; k < out.size(); ++k)
      b = alg.meet(b, alg.combine(g.arc(out[k].first).resource, bs.state_bound[out[k].second]));
    bs.state_bound[s] = std::move(b);
  }
  bs.per_vertex.assign(g.num_vertices(), {});
  for (int s = 0; s < sg.num_states(); ++s) bs.per_vertex[sg.state_vertex[s]].push_back(bs.state_bound[s]);
  return bs;
}

/// Recomputes the bounds after arc resources changed. Throws std::logic_error when the
/// graph topology differs from the one the state graph was built on.
template <ResourceAlgebra A>
BoundSets<typename A::Resource> update_bounds(const StateGraph& sg, const RcspGraph<typename A::Resource>& g,
                                              const A& alg) {
  if (g.topology_version() != sg.topology_version)
    throw std::logic_error("graph topology changed since the state graph was built");
  return compute_bounds(sg, g, alg);
}

/// Bound sets containing only the neutral resource at every vertex. Valid only when every
/// arc resource is above the neutral element.
template <ResourceAlgebra A>
BoundSets<typename A::Resource> trivial_bounds(const RcspGraph<typename A::Resource>& g, const A& alg) {
  BoundSets<typename A::Resource> bs;
  bs.per_vertex.assign(g.num_vertices(), {alg.neutral()});
  return bs;
}

struct SolveOptions {
  bool use_dom = true;
  bool use_low = true;
  double initial_upper_bound = kInfCost;
  bool verify_fold = false;  // recompute the resource of every accepted path from its arcs
};

struct SolveStats {
  long paths_enumerated = 0;  // labels extracted from the queue
  long cut_dom = 0;
  long cut_low = 0;
  long cut_infeasible = 0;
  double runtime_ms = 0.0;
  int kappa = 0;
  double bound_build_ms = 0.0;

  long discarded() const { return cut_dom + cut_low + cut_infeasible; }
};

template <class R>
struct PathResult {
  std::vector<int> arcs;
  R resource;
  double cost;
};

template <class R>
struct SolveResult {
  double cost = kInfCost;
  std::optional<PathResult<R>> path;
  SolveStats stats;
};

template <class R>
struct EnumerateResult {
  std::vector<PathResult<R>> paths;  // in extraction order
  bool truncated = false;
  SolveStats stats;
};

namespace detail {

template <class R>
struct Label {
  int vertex;
  int parent;
  int arc;
  R resource;
};

template <ResourceAlgebra A>
double key_of(const A& alg, const typename A::Resource& q, const std::vector<typename A::Resource>& bounds) {
  double best = kInfCost;
  for (const auto& b : bounds) {
    const auto full = alg.combine(q, b);
    if (alg.infeasible(full)) continue;
    best = std::min(best, alg.cost(full));
  }
  return best;
}

template <class R>
std::vector<int> arcs_of(const std::vector<Label<R>>& pool, int label) {
  std::vector<int> arcs;
  for (int l = label; pool[l].parent >= 0; l = pool[l].parent) arcs.push_back(pool[l].arc);
  std::reverse(arcs.begin(), arcs.end());
  return arcs;
}

template <ResourceAlgebra A>
void check_fold(const RcspGraph<typename A::Resource>& g, const A& alg, const std::vector<int>& arcs,
                const typename A::Resource& q) {
  auto f = alg.neutral();
  for (int a : arcs) f = alg.combine(f, g.arc(a).resource);
  if (!alg.leq(f, q) || !alg.leq(q, f))
    throw std::logic_error("algebra law violation: label resource differs from the left fold of its arcs");
}

// Shared label-setting loop. `accept` is called for labels reaching the destination with
// a feasible resource and returns the new upper bound.
template <ResourceAlgebra A, class Accept>
SolveStats search(const RcspGraph<typename A::Resource>& g, const A& alg, const BoundSets<typename A::Resource>& bs,
                  bool use_dom, bool use_low, double& ub, Accept&& accept) {
  using R = typename A::Resource;
  g.require_finalized();
  SolveStats st;
  std::vector<Label<R>> pool;
  using Entry = std::tuple<double, long, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  std::vector<std::vector<int>> nondominated(g.num_vertices());
  long seq = 0;
  const int o = g.origin();
  const int d = g.destination();

  pool.push_back({o, -1, -1, alg.neutral()});
  queue.emplace(key_of(alg, pool[0].resource, bs.per_vertex[o]), seq++, 0);

  while (!queue.empty()) {
    const auto [key, s, li] = queue.top();
    if (use_low && key > ub) {
      st.cut_low += static_cast<long>(queue.size());
      break;
    }
    queue.pop();
    ++st.paths_enumerated;
    const int v = pool[li].vertex;
    if (v == d) {
      if (!alg.infeasible(pool[li].resource)) ub = accept(pool, li);
      else ++st.cut_infeasible;
      continue;
    }
    if (alg.infeasible(pool[li].resource)) {
      ++st.cut_infeasible;
      continue;
    }
    if (use_low && key > ub) {
      ++st.cut_low;
      continue;
    }
    if (use_dom) {
      bool dominated = false;
      for (int other : nondominated[v])
        if (alg.leq(pool[other].resource, pool[li].resource)) {
          dominated = true;
          break;
        }
      if (dominated) {
        ++st.cut_dom;
        continue;
      }
      nondominated[v].push_back(li);
    }
    for (int a : g.out_arcs(v)) {
      const int w = g.arc(a).to;
      R q = alg.combine(pool[li].resource, g.arc(a).resource);
      const double k = key_of(alg, q, bs.per_vertex[w]);
      pool.push_back({w, li, a, std::move(q)});
      queue.emplace(k, seq++, static_cast<int>(pool.size()) - 1);
    }
  }
  return st;
}

}  // namespace detail

/// Minimum cost over feasible origin-destination paths (+inf when there is none).
template <ResourceAlgebra A>
SolveResult<typename A::Resource> solve(const RcspGraph<typename A::Resource>& g, const A& alg,
                                        const BoundSets<typename A::Resource>& bounds, const SolveOptions& opts = {}) {
  using R = typename A::Resource;
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult<R> res;
  double ub = opts.initial_upper_bound;
  res.stats = detail::search(g, alg, bounds, opts.use_dom, opts.use_low, ub,
                             [&](const std::vector<detail::Label<R>>& pool, int li) {
                               const double c = alg.cost(pool[li].resource);
                               if (opts.verify_fold) detail::check_fold(g, alg, detail::arcs_of(pool, li), pool[li].resource);
                               if (c < ub && (!res.path || c < res.cost)) {
                                 res.cost = c;
                                 res.path = PathResult<R>{detail::arcs_of(pool, li), pool[li].resource, c};
                                 return c;
                               }
                               return ub;
                             });
  res.stats.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

/// All feasible origin-destination paths with cost <= c_ub, without the dominance test.
/// Stops with `truncated` set once `path_limit` paths are found (0 means unlimited).
template <ResourceAlgebra A>
EnumerateResult<typename A::Resource> enumerate_within(const RcspGraph<typename A::Resource>& g, const A& alg,
                                                       const BoundSets<typename A::Resource>& bounds, double c_ub,
                                                       long path_limit = 0) {
  using R = typename A::Resource;
  const auto t0 = std::chrono::steady_clock::now();
  EnumerateResult<R> res;
  double ub = c_ub;
  struct Stop {};
  try {
    res.stats = detail::search(g, alg, bounds, false, true, ub,
                               [&](const std::vector<detail::Label<R>>& pool, int li) {
                                 const double c = alg.cost(pool[li].resource);
                                 if (c <= c_ub) {
                                   if (path_limit > 0 && static_cast<long>(res.paths.size()) >= path_limit) {
                                     res.truncated = true;
                                     throw Stop{};
                                   }
                                   res.paths.push_back({detail::arcs_of(pool, li), pool[li].resource, c});
                                 }
                                 return c_ub;
                               });
  } catch (const Stop&) {
  }
  res.stats.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

template <class R>
struct OracleResult {
  double cost = kInfCost;
  std::vector<PathResult<R>> feasible;  // depth-first order
};

/// Exhaustive depth-first enumeration of every origin-destination path. Throws
/// std::length_error beyond `max_paths` paths.
template <ResourceAlgebra A>
OracleResult<typename A::Resource> brute_force_oracle(const RcspGraph<typename A::Resource>& g, const A& alg,
                                                      long max_paths = 1000000) {
  using R = typename A::Resource;
  OracleResult<R> res;
  std::vector<std::vector<int>> out(g.num_vertices());
  for (int a = 0; a < g.num_arcs(); ++a) out[g.arc(a).from].push_back(a);
  std::vector<int> stack;
  long count = 0;
  std::function<void(int)> dfs = [&](int v) {
    if (v == g.destination()) {
      if (++count > max_paths) throw std::length_error("brute-force oracle: too many paths");
      R q = alg.neutral();
      for (int a : stack) q = alg.combine(q, g.arc(a).resource);
      if (alg.infeasible(q)) return;
      const double c = alg.cost(q);
      res.cost = std::min(res.cost, c);
      res.feasible.push_back({stack, std::move(q), c});
      return;
    }
    for (int a : out[v]) {
      stack.push_back(a);
      dfs(g.arc(a).to);
      stack.pop_back();
    }
  };
  dfs(g.origin());
  return res;
}

/// R^N with componentwise addition and order. Cost is component 0; a resource is
/// infeasible when some other component exceeds its capacity.
template <std::size_t N>
struct AdditiveAlgebra {
  using Resource = std::array<double, N>;
  std::array<double, N> capacity{};  // capacity[0] is ignored

  Resource neutral() const { return Resource{}; }
  Resource combine(const Resource& a, const Resource& b) const {
    Resource r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
  }
  bool leq(const Resource& a, const Resource& b) const {
    for (std::size_t i = 0; i < N; ++i)
      if (a[i] > b[i]) return false;
    return true;
  }
  Resource meet(const Resource& a, const Resource& b) const {
    Resource r;
    for (std::size_t i = 0; i < N; ++i) r[i] = std::min(a[i], b[i]);
    return r;
  }
  Resource join(const Resource& a, const Resource& b) const {
    Resource r;
    for (std::size_t i = 0; i < N; ++i) r[i] = std::max(a[i], b[i]);
    return r;
  }
  double cost(const Resource& a) const { return a[0]; }
  bool infeasible(const Resource& a) const {
    for (std::size_t i = 1; i < N; ++i)
      if (a[i] > capacity[i]) return true;
    return false;
  }
};

}  // namespace aircrew::rcsp
