#pragma once

#include <string>
#include <vector>

#include "aircrew/pairing.hpp"
#include "aircrew/routing.hpp"

namespace aircrew {

/// Short connections used between consecutive legs of the given pairings, sorted and
/// without repeats.
std::vector<int> short_connections_of(const std::vector<Pairing>& pairings);

/// Short-connection cuts: each forbids crew solutions that use all of its connections
/// (gamma = 1) or more than a gamma share of them (gamma < 1).
class CutPool {
 public:
  explicit CutPool(double gamma);

  /// Adds the cut for `connections`; returns false if that set is already present.
  /// Throws std::invalid_argument for an empty set.
  bool add(std::vector<int> connections);

  double gamma() const { return gamma_; }
  const std::vector<Cut>& cuts() const { return cuts_; }

 private:
  double gamma_;
  std::vector<Cut> cuts_;
};

struct IntegratedOptions {
  double gamma = 0.9;
  int iteration_limit = 100;
  CrewPairingOptions pairing;
  milp::MipOptions routing;
};

struct IntegratedIteration {
  int iteration = 0;
  std::vector<int> short_connections;  // S of this iteration's crew solution
  double pairing_objective = 0.0;
  int cg_iterations = 0;
  RoutingStatus routing_status = RoutingStatus::Infeasible;
  double pairing_ms = 0.0;
  double routing_ms = 0.0;
};

enum class IntegratedStatus { Converged, IterationLimit, PairingInfeasible, RoutingInfeasible, LimitReached };
const char* to_string(IntegratedStatus s);

struct IntegratedResult {
  IntegratedStatus status = IntegratedStatus::IterationLimit;
  CrewPairingResult pairing;  // last crew solution
  RoutingSolution routing;    // routing that realizes its short connections (when converged)
  double objective = 0.0;
  double lower_bound = 0.0;  // LP value of the crew master without cuts
  double gap = 0.0;
  int iterations = 0;
  int cg_iterations_total = 0;
  double pairing_ms = 0.0;  // column generation and master LPs
  double mip_ms = 0.0;      // master MIPs
  double routing_ms = 0.0;
  double total_ms = 0.0;
  std::vector<IntegratedIteration> log;
  std::vector<Cut> cuts;
};

/// Alternates crew pairing under the cut pool and routing that must realize the crew
/// solution's short connections, until the routing is feasible.
IntegratedResult solve_integrated(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                  const IntegratedOptions& opts = {});

}  // namespace aircrew
