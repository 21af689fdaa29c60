#include "doctest.h"

#include <random>

#include "aircrew/routing.hpp"
#include "oracles/routing_bruteforce.hpp"

using namespace aircrew;

namespace {

ProblemInstance make(std::vector<Airport> airports, std::vector<FlightLeg> legs, int T) {
  ProblemInstance inst;
  inst.name = "hand";
  inst.airports = std::move(airports);
  inst.legs = std::move(legs);
  inst.rules.maintenance_period_days = T;
  validate(inst);
  return inst;
}

Minutes at(int day, int hour, int minute = 0) { return day * kDayMinutes + hour * 60 + minute; }

RoutingGraph graph_of(const ProblemInstance& inst, Minutes ref = 0) {
  return build_routing_graph(inst, build_connections(inst), ref);
}

// Total elapsed time of a route, from raw leg times.
long route_minutes(const ProblemInstance& inst, const Route& r) {
  long total = 0;
  for (std::size_t i = 0; i < r.legs.size(); ++i)
    total += inst.legs[r.legs[i]].flying_minutes() +
             oracle::gap_minutes(inst.legs[r.legs[i]], inst.legs[r.legs[(i + 1) % r.legs.size()]]);
  return total;
}

void check_solution(const ProblemInstance& inst, const RoutingGraph& g, const RoutingSolution& sol, int fleet) {
  REQUIRE(sol.status == RoutingStatus::Feasible);
  std::vector<int> covered(inst.legs.size(), 0);
  int spans = 0;
  for (const auto& r : sol.routes) {
    for (int l : r.legs) ++covered[l];
    const long minutes = route_minutes(inst, r);
    CHECK(minutes % kWeekMinutes == 0);
    CHECK(r.week_span == minutes / kWeekMinutes);
    spans += r.week_span;
    for (std::size_t i = 0; i < r.legs.size(); ++i) {
      const auto& arc = g.arcs[r.arcs[i]];
      CHECK(g.leg_of(arc.from) == r.legs[i]);
      CHECK(g.leg_of(arc.to) == r.legs[(i + 1) % r.legs.size()]);
    }
  }
  for (int c : covered) CHECK(c == 1);
  CHECK(spans == sol.aircraft_used);
  CHECK(sol.aircraft_used <= fleet);
}

ProblemInstance two_week_cycle() {
  const std::vector<Airport> ap = {{"A", true, 0, 0}, {"B", true, 0, 0}, {"C", true, 0, 0}, {"D", true, 0, 0}};
  return make(ap,
              {{0, 0, 1, at(0, 10), at(0, 11)},
               {1, 1, 2, at(0, 8), at(0, 9)},
               {2, 2, 3, at(0, 12), at(0, 13)},
               {3, 3, 0, at(0, 14), at(0, 15)}},
              3);
}

}  // namespace

TEST_CASE("vertex count is legs times T") {
  auto inst = load_instance("data/toy2.json");
  const auto g = graph_of(inst);
  CHECK(g.num_vertices() == 6);
  CHECK(g.v_group(1) == std::vector<int>{3, 4, 5});
}

TEST_CASE("same-day connection keeps the counter") {
  const auto inst = make({{"A", true, 0, 0}, {"B", false, 0, 0}, {"C", true, 0, 0}},
                         {{0, 0, 1, at(1, 8), at(1, 9)}, {1, 1, 2, at(1, 10), at(1, 11)}}, 3);
  const auto g = graph_of(inst);
  const int c = g.find_connection(0, 1);
  REQUIRE(c >= 0);
  REQUIRE(g.connection_arcs[c].size() == 3);
  for (int a : g.connection_arcs[c]) CHECK(g.k_of(g.arcs[a].from) == g.k_of(g.arcs[a].to));
}

TEST_CASE("non-base overnight adds the midnights and is capped") {
  const auto inst = make({{"A", true, 0, 0}, {"B", false, 0, 0}, {"C", true, 0, 0}},
                         {{0, 0, 1, at(1, 20), at(1, 21)}, {1, 1, 2, at(2, 8), at(2, 9)}}, 2);
  const auto g = graph_of(inst);
  const int c = g.find_connection(0, 1);
  REQUIRE(c >= 0);
  REQUIRE(g.connection_arcs[c].size() == 1);
  const auto& arc = g.arcs[g.connection_arcs[c][0]];
  CHECK(arc.from == g.vertex(0, 1));
  CHECK(arc.to == g.vertex(1, 2));
  CHECK(g.out_arcs[g.vertex(0, 2)].empty());
}

TEST_CASE("base overnight resets the counter") {
  const auto inst = load_instance("data/toy2.json");
  const auto g = graph_of(inst);
  const int c = g.find_connection(1, 0);
  REQUIRE(c >= 0);
  CHECK(g.connection_arcs[c].size() == 3);
  for (int a : g.connection_arcs[c]) CHECK(g.k_of(g.arcs[a].to) == 1);
}

TEST_CASE("model row counts") {
  const auto inst = load_instance("data/toy2.json");
  const auto g = graph_of(inst);
  const auto m = build_ar_model(g, 1);
  CHECK(m.lp.num_rows() == g.num_vertices() + 2 + 1);
  CHECK(m.lp.num_vars() == static_cast<int>(g.arcs.size()));
  const int c = g.find_connection(0, 1);
  const auto forced = build_ar_model(g, 1, {{c, 1}});
  CHECK(forced.lp.num_rows() == m.lp.num_rows() + 1);
  CHECK(forced.lp.rows().back().coeffs.size() == 3);
  CHECK(forced.lp.rows().back().rel == milp::Relation::GreaterEq);
  CHECK_THROWS_AS(build_ar_model(g, 1, {{99, 1}}), std::invalid_argument);
}

TEST_CASE("toy round trip needs one aircraft") {
  auto inst = load_instance("data/toy2.json");
  inst.rules.maintenance_period_days = 2;
  const auto g = graph_of(inst);
  const auto sol = solve_routing(g, 1);
  check_solution(inst, g, sol, 1);
  REQUIRE(sol.routes.size() == 1);
  CHECK(sol.routes[0].legs == std::vector<int>{0, 1});
  CHECK(sol.routes[0].week_span == 1);
  CHECK(solve_routing(g, 0).status == RoutingStatus::Infeasible);
  CHECK(minimize_aircraft(g).first == 1);
}

TEST_CASE("a two-week cycle crosses the reference twice") {
  const auto inst = two_week_cycle();
  const auto g = graph_of(inst);
  CHECK(solve_routing(g, 1).status == RoutingStatus::Infeasible);
  const auto sol = solve_routing(g, 2);
  check_solution(inst, g, sol, 2);
  CHECK(sol.aircraft_used == 2);
  REQUIRE(sol.routes.size() == 1);
  CHECK(sol.routes[0].week_span == 2);
  CHECK(oracle::routing_truth(inst).min_aircraft == 2);
}

TEST_CASE("chainable round trips share an aircraft") {
  const std::vector<Airport> ap = {{"A", true, 0, 0}, {"B", false, 0, 0}, {"C", false, 0, 0}};
  const auto chain = make(ap,
                          {{0, 0, 1, at(0, 8), at(0, 9)},
                           {1, 1, 0, at(0, 10), at(0, 11)},
                           {2, 0, 2, at(0, 12), at(0, 13)},
                           {3, 2, 0, at(0, 14), at(0, 15)}},
                          3);
  CHECK(minimize_aircraft(graph_of(chain)).first == 1);
  const auto overlap = make(ap,
                            {{0, 0, 1, at(0, 8), at(0, 9)},
                             {1, 1, 0, at(0, 10), at(0, 11)},
                             {2, 0, 2, at(0, 8, 30), at(0, 9, 30)},
                             {3, 2, 0, at(0, 10, 30), at(0, 11, 30)}},
                            3);
  const auto [count, sol] = minimize_aircraft(graph_of(overlap));
  CHECK(count == 2);
  check_solution(overlap, graph_of(overlap), sol, 2);
}

TEST_CASE("uncoverable legs are reported") {
  const auto inst = make({{"A", true, 0, 0}, {"B", false, 0, 0}, {"C", false, 0, 0}},
                         {{0, 0, 1, at(0, 8), at(0, 9)}, {1, 1, 0, at(0, 10), at(0, 11)}, {2, 0, 2, at(0, 12), at(0, 13)}},
                         3);
  const auto [count, sol] = minimize_aircraft(graph_of(inst));
  CHECK(count == -1);
  CHECK(sol.status == RoutingStatus::Infeasible);
  CHECK(sol.uncoverable_legs == std::vector<int>{2});
}

TEST_CASE("random small instances agree with cycle enumeration") {
  std::mt19937_64 rng(2024);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    GeneratorParams p;
    p.airports = 2 + static_cast<int>(rng() % 3);
    p.bases = 1 + static_cast<int>(rng() % 2);
    p.legs = 4 + 2 * static_cast<int>(rng() % 4);
    p.fleet_size = 1 + static_cast<int>(rng() % 3);
    p.seed = rng();
    auto inst = generate_instance(p);
    inst.rules.maintenance_period_days = 1 + static_cast<int>(rng() % 3);
    const auto truth = oracle::routing_truth(inst);
    const auto g = graph_of(inst);
    const auto sol = solve_routing(g, inst.rules.fleet_size);
    const bool ok = truth.any_cover && truth.min_aircraft <= inst.rules.fleet_size;
    CHECK((sol.status == RoutingStatus::Feasible) == ok);
    if (ok) {
      check_solution(inst, g, sol, inst.rules.fleet_size);
      ++feasible;
    } else {
      ++infeasible;
    }
    CHECK(minimize_aircraft(g).first == truth.min_aircraft);
    const auto shifted = graph_of(inst, static_cast<Minutes>(rng() % kWeekMinutes));
    CHECK(solve_routing(shifted, inst.rules.fleet_size).status == sol.status);
  }
  CHECK(feasible > 0);
  CHECK(infeasible > 0);
}
