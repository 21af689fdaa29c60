#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aircrew/instance.hpp"
#include "aircrew/milp.hpp"
#include "aircrew/rcsp.hpp"

namespace aircrew {

/// Pairings with at least this many nights span more than three calendar days.
inline constexpr int kLongPairingNights = 3;

/// Pricing resource. The core tracks the open duties: a single-day pairing keeps one
/// (legs, effective flying) pair, a multi-day one keeps its first and its last duty plus
/// the number of completed middle duties that are long. Bottom and Top close the lattice.
struct PairingResource {
  enum class Core : unsigned char { Bottom, OneDay, MultiDay, Top };

  Core core = Core::OneDay;
  int first_legs = 0;       // OneDay: the legs of the only duty
  int first_flying = 0;     // effective flying minutes
  int last_legs = 0;        // MultiDay only; includes the reduced-rest offset
  int last_flying = 0;
  bool last_reduced = false;  // last duty follows a reduced rest (order reversed)
  int long_middle = 0;        // completed middle duties that are long

  double z = 0.0;        // reduced-cost accumulator
  int nights = 0;        // midnights spent away
  int night_conns = 0;   // night connections; order reversed

  bool operator==(const PairingResource&) const = default;

  static PairingResource one_day(int legs, int flying, double z = 0.0) {
    PairingResource r;
    r.first_legs = legs;
    r.first_flying = flying;
    r.z = z;
    return r;
  }
  static PairingResource top() {
    PairingResource r;
    r.core = Core::Top;
    return r;
  }
  static PairingResource bottom() {
    PairingResource r;
    r.core = Core::Bottom;
    return r;
  }
};

std::string to_string(const PairingResource& r);

/// Master dual values seen by the pricing problem.
struct PricingDuals {
  std::vector<double> cover;      // per leg (free sign)
  double alpha_row = 0.0;         // <= 0
  double beta_row = 0.0;          // <= 0
  std::vector<double> connection_penalty;  // per connection: -sum of cut duals covering it (>= 0)
};

class PairingAlgebra {
 public:
  using Resource = PairingResource;

  PairingAlgebra(const RulesConfig& rules, double alpha_dual = 0.0, double beta_dual = 0.0);

  Resource neutral() const { return Resource{}; }
  Resource combine(const Resource& a, const Resource& b) const;
  bool leq(const Resource& a, const Resource& b) const;
  Resource meet(const Resource& a, const Resource& b) const;
  Resource join(const Resource& a, const Resource& b) const;
  double cost(const Resource& a) const;
  bool infeasible(const Resource& a) const;
  /// State merging prefers clusters within one core family.
  double merge_penalty(const Resource& a, const Resource& b) const;

  /// Long duties counted so far, boundary duties included (0 for Bottom).
  int long_duties(const Resource& a) const;
  bool is_long_duty(int legs) const { return legs >= max_legs_; }

  int max_legs() const { return max_legs_; }
  int reduced_offset() const { return max_legs_ - reduced_legs_; }

 private:
  int max_legs_;
  int reduced_legs_;
  int flying_max_;
  double alpha_;
  double beta_;
  double mu_;
  double nu_;
};

/// Arc roles of a pricing network.
enum class PricingArcKind { Start, Day, Night, End };

/// Pricing digraph of one window of consecutive days: vertex 0 is the origin, 1 the
/// destination, 2 + i the i-th leg of the window.
struct PairingNetwork {
  int window_start = 0;
  std::vector<int> legs;  // global leg id per local index, sorted by unrolled departure
  struct ArcInfo {
    PricingArcKind kind;
    int leg;          // leg entered by the arc (-1 for End)
    int connection;   // index into the connection list (-1 for Start/End)
  };
  std::vector<ArcInfo> arc_info;
  rcsp::RcspGraph<PairingResource> graph{2, 0, 1};
};

/// Builds the window network and its arc resources for the given duals (all zero when
/// `duals` is null). Crew bases are the base airports.
PairingNetwork build_pricing_network(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                     int window_start, const PricingDuals* duals = nullptr);

/// Rewrites every arc resource for new duals, keeping the topology.
void set_network_duals(PairingNetwork& net, const ProblemInstance& inst, const std::vector<Connection>& connections,
                       const PricingDuals& duals);

PairingAlgebra make_algebra(const RulesConfig& rules, const PricingDuals& duals);

struct Pairing {
  std::vector<int> legs;
  std::vector<std::vector<int>> duties;
  std::vector<int> connections;        // connection index between consecutive legs
  std::vector<int> short_connections;  // subset of `connections` of kind short
  double cost = 0.0;
  int flying_minutes = 0;
  int nights = 0;
  int long_duties = 0;
  bool is_long = false;
  bool artificial = false;

  int num_duties() const { return static_cast<int>(duties.size()); }
};

/// Map from (from_leg, to_leg) to connection index.
using ConnectionIndex = std::map<std::pair<int, int>, int>;
ConnectionIndex index_connections(const std::vector<Connection>& connections);

/// Rebuilds all pairing attributes from a leg sequence. Throws std::invalid_argument if
/// consecutive legs are not crew connections.
Pairing make_pairing(const ProblemInstance& inst, const std::vector<Connection>& connections,
                     const ConnectionIndex& index, const std::vector<int>& legs);

/// Legality under the three pairing rules plus start/end at a base and the span cap.
bool is_legal_pairing(const ProblemInstance& inst, const std::vector<Connection>& connections, const Pairing& p);

/// A short-connection cut: sum_p |p n S| y_p <= rhs.
struct Cut {
  std::vector<int> connections;  // sorted connection indices
  double rhs = 0.0;
};

double cut_rhs(std::size_t size, double gamma);
int cut_coefficient(const Cut& cut, const Pairing& p);

struct MasterModel {
  milp::LinearProgram lp;  // column j <-> pool[j]; artificial columns after the pool
  int num_pool = 0;
  int alpha_row = -1;
  int beta_row = -1;
  int first_cut_row = -1;
};

/// Cover equalities, long-pairing and long-duty ratio rows, one row per cut and one
/// big-M artificial column per leg.
MasterModel build_master(const std::vector<Pairing>& pool, const ProblemInstance& inst,
                         const std::vector<Cut>& cuts = {});

/// Cost of an artificial single-leg column.
double artificial_cost(const ProblemInstance& inst);

/// Reduced cost of a pairing from master row data and duals.
double reduced_cost(const Pairing& p, const ProblemInstance& inst, const std::vector<Cut>& cuts,
                    const milp::LpSolution& lp, const MasterModel& model);

PricingDuals pricing_duals(const ProblemInstance& inst, const std::vector<Connection>& connections,
                           const std::vector<Cut>& cuts, const milp::LpSolution& lp, const MasterModel& model);

struct PricedColumn {
  Pairing pairing;
  double reduced_cost = 0.0;
};

struct PricingStats {
  long solves = 0;
  long paths_enumerated = 0;
  long cut_dom = 0;
  long cut_low = 0;
  long cut_infeasible = 0;
  double bound_build_ms = 0.0;
  double search_ms = 0.0;
};

struct PricingOptions {
  std::optional<int> kappa;  // nullopt selects the rule of thumb per network
  bool use_dom = true;
  bool use_low = true;
  int jobs = 1;
  long path_limit = 200000;
};

/// Pricing over the seven windows. Keeps the state graphs between calls.
class PricingEngine {
 public:
  PricingEngine(const ProblemInstance& inst, const std::vector<Connection>& connections, PricingOptions opts);

  /// Best column of every window, deduplicated by leg sequence, in window order.
  std::vector<PricedColumn> best(const PricingDuals& duals);
  /// All columns with reduced cost <= gap; `truncated` reports a hit path limit.
  std::vector<PricedColumn> all_within(const PricingDuals& duals, double gap, bool& truncated);

  const PricingStats& stats() const { return stats_; }
  const std::vector<PairingNetwork>& networks() const { return nets_; }
  std::vector<int> kappas() const;

 private:
  void prepare(const PricingDuals& duals);

  const ProblemInstance& inst_;
  const std::vector<Connection>& connections_;
  ConnectionIndex index_;
  PricingOptions opts_;
  std::vector<PairingNetwork> nets_;
  std::vector<rcsp::StateGraph> states_;
  std::vector<rcsp::BoundSets<PairingResource>> bounds_;
  bool built_ = false;
  PricingStats stats_;
};

struct CrewPairingOptions {
  PricingOptions pricing;
  long node_limit = 0;             // final MIP; 0 means unlimited
  long upper_bound_nodes = 2000;   // MIP over the generated columns that sets the completion gap
  bool dive = true;                // price-and-dive for a first cover
  bool lp_only = false;            // stop after column generation: c_lb only, status LimitReached
  int max_cg_iterations = 10000;
  double rc_tolerance = 1e-6;
  std::vector<Cut> cuts;
};

struct CrewPairingStats {
  int cg_iterations = 0;
  int dive_iterations = 0;        // restricted master LPs solved while diving
  int columns_generated = 0;
  int completion_columns = 0;
  double pricing_ms = 0.0;
  double lp_ms = 0.0;
  double mip_ms = 0.0;
  double total_ms = 0.0;
  long mip_nodes = 0;
  std::vector<double> lp_values;  // restricted master LP value per iteration
  PricingStats pricing;
  std::vector<int> kappas;        // bound-set size cap per window network
  double max_rc_error = 0.0;      // post-hoc reduced-cost exactness check
};

enum class CrewPairingStatus { Optimal, Feasible, Infeasible, LimitReached };
const char* to_string(CrewPairingStatus s);

struct CrewPairingResult {
  CrewPairingStatus status = CrewPairingStatus::Infeasible;
  std::vector<Pairing> pairings;
  double c_lb = 0.0;
  double c_ub = 0.0;
  double objective = 0.0;
  bool provably_optimal = false;
  bool completion_truncated = false;
  std::vector<int> uncovered_legs;
  std::vector<Pairing> pool;
  CrewPairingStats stats;
};

CrewPairingResult solve_crew_pairing(const ProblemInstance& inst, const std::vector<Connection>& connections,
                                     const CrewPairingOptions& opts = {});

}  // namespace aircrew
