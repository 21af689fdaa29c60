#include "aircrew/routing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace aircrew {

namespace {

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Number of instants congruent to `ref` modulo a week inside [start, start + length).
int crossings(Minutes start, Minutes length, Minutes ref) {
  if (length <= 0) return 0;
  return static_cast<int>(floor_div(start + length - 1 - ref, kWeekMinutes) - floor_div(start - 1 - ref, kWeekMinutes));
}

}  // namespace

std::vector<int> RoutingGraph::v_group(int leg) const {
  std::vector<int> vs;
  for (int k = 1; k <= maintenance_days; ++k) vs.push_back(vertex(leg, k));
  return vs;
}

std::vector<int> RoutingGraph::a0_arcs() const {
  std::vector<int> out;
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a)
    if (arcs[a].a0_multiplicity > 0) out.push_back(a);
  return out;
}

int RoutingGraph::find_connection(int from_leg, int to_leg) const {
  auto it = std::lower_bound(connections.begin(), connections.end(), std::pair{from_leg, to_leg},
                             [](const Connection& c, const std::pair<int, int>& key) {
                               return std::pair{c.from_leg, c.to_leg} < key;
                             });
  if (it == connections.end() || it->from_leg != from_leg || it->to_leg != to_leg) return -1;
  return static_cast<int>(it - connections.begin());
}

RoutingGraph build_routing_graph(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                 Minutes reference_instant) {
  RoutingGraph g;
  const int T = inst.rules.maintenance_period_days;
  g.maintenance_days = T;
  g.num_legs = static_cast<int>(inst.legs.size());
  g.reference_instant = ((reference_instant % kWeekMinutes) + kWeekMinutes) % kWeekMinutes;
  g.connections = connections;
  std::sort(g.connections.begin(), g.connections.end(), [](const Connection& a, const Connection& b) {
    return std::pair{a.from_leg, a.to_leg} < std::pair{b.from_leg, b.to_leg};
  });
  g.out_arcs.assign(g.num_vertices(), {});
  g.in_arcs.assign(g.num_vertices(), {});
  g.connection_arcs.assign(g.connections.size(), {});

  for (int ci = 0; ci < static_cast<int>(g.connections.size()); ++ci) {
    const Connection& c = g.connections[ci];
    const FlightLeg& from = inst.legs[c.from_leg];
    const bool at_base = inst.airports[from.arr_airport].is_base;
    const int mult = crossings(from.dep_time, from.flying_minutes() + c.ground_minutes, g.reference_instant);
    for (int k = 1; k <= T; ++k) {
      int k2;
      if (c.midnights_crossed == 0) k2 = k;
      else if (at_base) k2 = 1;
      else k2 = k + c.midnights_crossed;
      if (k2 > T) continue;
      const int a = static_cast<int>(g.arcs.size());
      g.arcs.push_back({g.vertex(c.from_leg, k), g.vertex(c.to_leg, k2), ci, mult});
      g.out_arcs[g.arcs.back().from].push_back(a);
      g.in_arcs[g.arcs.back().to].push_back(a);
      g.connection_arcs[ci].push_back(a);
    }
  }
  return g;
}

ArModel build_ar_model(const RoutingGraph& g, int fleet_size, const std::vector<ForcedConnection>& forced) {
  ArModel m;
  auto& lp = m.lp;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) lp.add_binary(0.0, "x" + std::to_string(a));
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::vector<std::pair<int, double>> row;
    for (int a : g.in_arcs[v]) row.emplace_back(a, 1.0);
    for (int a : g.out_arcs[v]) row.emplace_back(a, -1.0);
    lp.add_row(std::move(row), milp::Relation::Equal, 0.0, "flow_" + std::to_string(v));
  }
  for (int l = 0; l < g.num_legs; ++l) {
    std::vector<std::pair<int, double>> row;
    for (int v : g.v_group(l))
      for (int a : g.in_arcs[v]) row.emplace_back(a, 1.0);
    lp.add_row(std::move(row), milp::Relation::Equal, 1.0, "cover_" + std::to_string(l));
  }
  std::vector<std::pair<int, double>> budget;
  for (int a : g.a0_arcs()) budget.emplace_back(a, g.arcs[a].a0_multiplicity);
  m.budget_row = lp.add_row(std::move(budget), milp::Relation::LessEq, fleet_size, "fleet");
  for (const auto& f : forced) {
    if (f.connection < 0 || f.connection >= static_cast<int>(g.connections.size()) ||
        g.connection_arcs[f.connection].empty())
      throw std::invalid_argument("forced connection " + std::to_string(f.connection) + " has no routing arc");
    std::vector<std::pair<int, double>> row;
    for (int a : g.connection_arcs[f.connection]) row.emplace_back(a, 1.0);
    lp.add_row(std::move(row), milp::Relation::GreaterEq, f.min_usage, "force_" + std::to_string(f.connection));
  }
  return m;
}

const char* to_string(RoutingStatus s) {
  switch (s) {
    case RoutingStatus::Feasible: return "feasible";
    case RoutingStatus::Infeasible: return "infeasible";
    case RoutingStatus::LimitReached: return "limit_reached";
  }
  return "?";
}

namespace {

std::vector<int> uncoverable(const RoutingGraph& g) {
  std::vector<int> out;
  for (int l = 0; l < g.num_legs; ++l) {
    bool has_in = false, has_out = false;
    for (int v : g.v_group(l)) {
      has_in = has_in || !g.in_arcs[v].empty();
      has_out = has_out || !g.out_arcs[v].empty();
    }
    if (!has_in || !has_out) out.push_back(l);
  }
  return out;
}

RoutingSolution extract(const RoutingGraph& g, const milp::MipResult& mip) {
  RoutingSolution sol;
  sol.nodes = mip.nodes;
  if (mip.status == milp::MipStatus::NodeLimit) {
    sol.status = RoutingStatus::LimitReached;
    return sol;
  }
  if (mip.status == milp::MipStatus::Infeasible) {
    sol.status = RoutingStatus::Infeasible;
    sol.uncoverable_legs = uncoverable(g);
    return sol;
  }
  sol.status = RoutingStatus::Feasible;
  std::vector<int> next_arc(g.num_vertices(), -1);
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
    if (mip.values[a] < 0.5) continue;
    sol.selected_arcs.push_back(a);
    next_arc[g.arcs[a].from] = a;
  }
  std::vector<char> seen(g.num_vertices(), 0);
  for (int l = 0; l < g.num_legs; ++l) {
    for (int start : g.v_group(l)) {
      if (seen[start] || next_arc[start] < 0) continue;
      Route r;
      for (int v = start; !seen[v]; v = g.arcs[next_arc[v]].to) {
        seen[v] = 1;
        r.legs.push_back(g.leg_of(v));
        r.arcs.push_back(next_arc[v]);
        r.week_span += g.arcs[next_arc[v]].a0_multiplicity;
      }
      sol.aircraft_used += r.week_span;
      sol.routes.push_back(std::move(r));
    }
  }
  return sol;
}

}  // namespace

RoutingSolution solve_routing(const RoutingGraph& g, int fleet_size, const std::vector<ForcedConnection>& forced,
                              const milp::MipOptions& opts) {
  const ArModel m = build_ar_model(g, fleet_size, forced);
  return extract(g, milp::solve_mip(m.lp, opts));
}

std::pair<int, RoutingSolution> minimize_aircraft(const RoutingGraph& g, const std::vector<ForcedConnection>& forced,
                                                  const milp::MipOptions& opts) {
  ArModel m = build_ar_model(g, 0, forced);
  // The budget row becomes the objective; drop its bound.
  auto& budget = m.lp.row(m.budget_row);
  for (auto [a, w] : budget.coeffs) m.lp.var(a).cost = w;
  budget.rhs = static_cast<double>(g.num_legs) * (g.num_legs + 1);
  RoutingSolution sol = extract(g, milp::solve_mip(m.lp, opts));
  return {sol.status == RoutingStatus::Feasible ? sol.aircraft_used : -1, std::move(sol)};
}

}  // namespace aircrew
