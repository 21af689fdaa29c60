#include "aircrew/integrated.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace aircrew {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

const char* to_string(IntegratedStatus s) {
  switch (s) {
    case IntegratedStatus::Converged: return "converged";
    case IntegratedStatus::IterationLimit: return "iteration_limit";
    case IntegratedStatus::PairingInfeasible: return "pairing_infeasible";
    case IntegratedStatus::RoutingInfeasible: return "routing_infeasible";
    case IntegratedStatus::LimitReached: return "limit_reached";
  }
  return "?";
}

std::vector<int> short_connections_of(const std::vector<Pairing>& pairings) {
  std::vector<int> s;
  for (const auto& p : pairings) s.insert(s.end(), p.short_connections.begin(), p.short_connections.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

CutPool::CutPool(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || gamma > 1.0) throw std::invalid_argument("gamma must lie in (0,1]");
}

bool CutPool::add(std::vector<int> connections) {
  if (connections.empty()) throw std::invalid_argument("a cut needs at least one short connection");
  std::sort(connections.begin(), connections.end());
  connections.erase(std::unique(connections.begin(), connections.end()), connections.end());
  for (const auto& c : cuts_)
    if (c.connections == connections) return false;
  const double rhs = cut_rhs(connections.size(), gamma_);
  cuts_.push_back({std::move(connections), rhs});
  return true;
}

IntegratedResult solve_integrated(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                  const IntegratedOptions& opts) {
  const auto t_start = Clock::now();
  IntegratedResult res;
  CutPool pool(opts.gamma);
  const RoutingGraph graph = build_routing_graph(inst, connections);
  CrewPairingOptions cp = opts.pairing;

  auto finish = [&](IntegratedStatus status) {
    res.status = status;
    res.cuts = pool.cuts();
    res.objective = res.pairing.objective;
    res.gap = res.objective - res.lower_bound;
    if (std::abs(res.gap) < 1e-6) res.gap = 0.0;  // LP round-off on a closed gap
    res.total_ms = ms_since(t_start);
    return res;
  };

  while (res.iterations < opts.iteration_limit) {
    ++res.iterations;
    IntegratedIteration it;
    it.iteration = res.iterations;
    cp.cuts = pool.cuts();
    auto t0 = Clock::now();
    res.pairing = solve_crew_pairing(inst, connections, cp);
    it.pairing_ms = ms_since(t0);
    res.pairing_ms += it.pairing_ms - res.pairing.stats.mip_ms;
    res.mip_ms += res.pairing.stats.mip_ms;
    res.cg_iterations_total += res.pairing.stats.cg_iterations;
    it.cg_iterations = res.pairing.stats.cg_iterations;
    it.pairing_objective = res.pairing.objective;
    if (res.iterations == 1) res.lower_bound = res.pairing.c_lb;

    const auto st = res.pairing.status;
    if (st == CrewPairingStatus::Infeasible) {
      res.log.push_back(it);
      return finish(IntegratedStatus::PairingInfeasible);
    }
    if (st == CrewPairingStatus::LimitReached) {
      res.log.push_back(it);
      return finish(IntegratedStatus::LimitReached);
    }

    it.short_connections = short_connections_of(res.pairing.pairings);
    std::vector<ForcedConnection> forced;
    for (int c : it.short_connections) {
      const int rc = graph.find_connection(connections[c].from_leg, connections[c].to_leg);
      if (rc < 0) throw std::logic_error("short connection missing from the routing graph");
      forced.push_back({rc, 1});
    }
    t0 = Clock::now();
    res.routing = solve_routing(graph, inst.rules.fleet_size, forced, opts.routing);
    it.routing_ms = ms_since(t0);
    res.routing_ms += it.routing_ms;
    it.routing_status = res.routing.status;
    res.log.push_back(it);

    if (res.routing.status == RoutingStatus::Feasible) return finish(IntegratedStatus::Converged);
    if (res.routing.status == RoutingStatus::LimitReached) return finish(IntegratedStatus::LimitReached);
    if (it.short_connections.empty()) return finish(IntegratedStatus::RoutingInfeasible);
    if (!pool.add(it.short_connections))
      throw std::logic_error("crew solution repeats a short-connection set that is already cut");
  }
  return finish(IntegratedStatus::IterationLimit);
}

}  // namespace aircrew
