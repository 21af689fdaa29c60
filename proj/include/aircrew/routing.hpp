#pragma once

#include <utility>
#include <vector>

#include "aircrew/instance.hpp"
#include "aircrew/milp.hpp"

namespace aircrew {

/// Arc ((from_leg, k), (to_leg, k')) of the maintenance-state graph.
struct RoutingArc {
  int from = 0;        // vertex index
  int to = 0;          // vertex index
  int connection = 0;  // index into RoutingGraph::connections
  int a0_multiplicity = 0;  // times the reference instant falls in [dep(from_leg), dep(to_leg))
};

/// Vertices are (leg, k) with k in 1..T, k = days since the last night at a base.
class RoutingGraph {
 public:
  int maintenance_days = 1;
  int num_legs = 0;
  Minutes reference_instant = 0;
  std::vector<Connection> connections;
  std::vector<RoutingArc> arcs;
  std::vector<std::vector<int>> out_arcs;  // per vertex
  std::vector<std::vector<int>> in_arcs;   // per vertex
  std::vector<std::vector<int>> connection_arcs;  // per connection: all of its k-copies

  int num_vertices() const { return num_legs * maintenance_days; }
  int vertex(int leg, int k) const { return leg * maintenance_days + (k - 1); }
  int leg_of(int v) const { return v / maintenance_days; }
  int k_of(int v) const { return v % maintenance_days + 1; }
  std::vector<int> v_group(int leg) const;
  std::vector<int> a0_arcs() const;
  /// Index of the connection (from_leg, to_leg), or -1.
  int find_connection(int from_leg, int to_leg) const;
};

/// Builds the graph from the airplane-usable connections. The reference instant (minute
/// of the week) defines which arcs cross the week boundary.
RoutingGraph build_routing_graph(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                 Minutes reference_instant = 0);

/// A connection that must be kept on one airplane at least `min_usage` times.
struct ForcedConnection {
  int connection = 0;  // index into RoutingGraph::connections
  int min_usage = 1;
};

struct ArModel {
  milp::LinearProgram lp;  // one binary per arc, same order as RoutingGraph::arcs
  int budget_row = -1;
};

/// Flow conservation per vertex, cover per leg group, weighted week-crossing budget and
/// one forcing row per forced connection. Throws std::invalid_argument for an unknown
/// forced connection.
ArModel build_ar_model(const RoutingGraph& g, int fleet_size, const std::vector<ForcedConnection>& forced = {});

enum class RoutingStatus { Feasible, Infeasible, LimitReached };
const char* to_string(RoutingStatus s);

struct Route {
  std::vector<int> legs;  // cyclic, starting from the smallest leg id
  std::vector<int> arcs;  // arcs[i] leaves legs[i]
  int week_span = 0;      // number of week-crossing arcs, counted with multiplicity
};

struct RoutingSolution {
  RoutingStatus status = RoutingStatus::Infeasible;
  std::vector<int> selected_arcs;
  std::vector<Route> routes;
  int aircraft_used = 0;
  std::vector<int> uncoverable_legs;  // legs without any usable in- or out-arc
  long nodes = 0;
};

RoutingSolution solve_routing(const RoutingGraph& g, int fleet_size, const std::vector<ForcedConnection>& forced = {},
                              const milp::MipOptions& opts = {});

/// Minimum number of airplanes over all feasible routings, with a witness. The first
/// member is -1 when no routing exists.
std::pair<int, RoutingSolution> minimize_aircraft(const RoutingGraph& g, const std::vector<ForcedConnection>& forced = {},
                                                  const milp::MipOptions& opts = {});

}  // namespace aircrew
