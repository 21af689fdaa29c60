// aircrew: instance generation, the routing / crew pairing / integrated solvers, the
// brute-force cross-check and report re-rendering.
//
// Exit codes: 0 solved, 1 usage, I/O, validation or oracle mismatch, 2 proven infeasible,
// 3 a limit was hit.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "aircrew/instance.hpp"
#include "aircrew/integrated.hpp"
#include "aircrew/report.hpp"
#include "aircrew/routing.hpp"
#include "oracles/integrated_bruteforce.hpp"

using namespace aircrew;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitLimit = 3;

// Largest instances the oracle command will enumerate.
constexpr int kOracleMaxLegs = 12;
constexpr int kJointOracleMaxLegs = 8;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string instance_path;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 1;
  int jobs = 1;
  bool stats = false;
  bool timing = false;
  long limit_nodes = 0;
  long limit_paths = 200000;
  std::string kappa;
  std::optional<double> gamma, alpha, beta;
  int iteration_limit = 100;

  // generate
  int legs = 0;
  int aircraft = 3;
  int airports = 6;
  int bases = 2;
  std::string name;
};

void emit(const Settings& s, const std::string& text) {
  if (s.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(s.output, std::ios::binary);
  if (!out) throw CliError("cannot write " + s.output);
  out << text;
  if (!out) throw CliError("write failed for " + s.output);
}

ProblemInstance load_with_overrides(const Settings& s) {
  ProblemInstance inst = load_instance(s.instance_path);
  auto& r = inst.rules;
  if (!s.kappa.empty()) {
    if (s.kappa == "auto") {
      r.kappa.reset();
    } else {
      try {
        std::size_t used = 0;
        r.kappa = std::stoi(s.kappa, &used);
        if (used != s.kappa.size()) throw std::invalid_argument(s.kappa);
      } catch (const std::logic_error&) {
        throw CliError("--kappa expects a positive integer or auto, got '" + s.kappa + "'");
      }
    }
  }
  if (s.gamma) r.gamma = *s.gamma;
  if (s.alpha) r.alpha = *s.alpha;
  if (s.beta) r.beta = *s.beta;
  validate(inst);
  return inst;
}

ReportOptions report_options(const Settings& s) { return {s.stats, s.timing}; }

CrewPairingOptions pairing_options(const ProblemInstance& inst, const Settings& s) {
  CrewPairingOptions o;
  o.pricing.kappa = inst.rules.kappa;
  o.pricing.jobs = s.jobs;
  o.pricing.path_limit = s.limit_paths;
  o.node_limit = s.limit_nodes;
  return o;
}

void write_report(const Settings& s, const Json& report) { emit(s, render_report(report, parse_report_format(s.format))); }

int cmd_generate(const Settings& s) {
  GeneratorParams p;
  p.legs = s.legs;
  p.fleet_size = s.aircraft;
  p.airports = s.airports;
  p.bases = s.bases;
  p.seed = s.seed;
  p.name = s.name;
  emit(s, dump_instance(generate_instance(p)));
  return kExitSolved;
}

int cmd_route(const Settings& s) {
  const auto inst = load_with_overrides(s);
  const auto graph = build_routing_graph(inst, build_connections(inst));
  milp::MipOptions mo;
  mo.node_limit = s.limit_nodes;
  const auto sol = solve_routing(graph, inst.rules.fleet_size, {}, mo);
  write_report(s, routing_report(inst, sol, report_options(s)));
  switch (sol.status) {
    case RoutingStatus::Feasible: return kExitSolved;
    case RoutingStatus::Infeasible: return kExitInfeasible;
    case RoutingStatus::LimitReached: return kExitLimit;
  }
  return kExitError;
}

int cmd_pair(const Settings& s) {
  const auto inst = load_with_overrides(s);
  const auto res = solve_crew_pairing(inst, build_connections(inst), pairing_options(inst, s));
  write_report(s, pairing_report(inst, res, report_options(s)));
  switch (res.status) {
    case CrewPairingStatus::Optimal: return kExitSolved;
    case CrewPairingStatus::Feasible: return kExitLimit;  // completion path limit: not certified
    case CrewPairingStatus::Infeasible: return kExitInfeasible;
    case CrewPairingStatus::LimitReached: return kExitLimit;
  }
  return kExitError;
}

int cmd_integrated(const Settings& s) {
  const auto inst = load_with_overrides(s);
  const auto conns = build_connections(inst);
  IntegratedOptions o;
  o.gamma = inst.rules.gamma;
  o.iteration_limit = s.iteration_limit;
  o.pairing = pairing_options(inst, s);
  o.routing.node_limit = s.limit_nodes;
  const auto res = solve_integrated(inst, conns, o);
  write_report(s, integrated_report(inst, conns, res, report_options(s)));
  switch (res.status) {
    case IntegratedStatus::Converged: return kExitSolved;
    case IntegratedStatus::PairingInfeasible:
    case IntegratedStatus::RoutingInfeasible: return kExitInfeasible;
    case IntegratedStatus::IterationLimit:
    case IntegratedStatus::LimitReached: return kExitLimit;
  }
  return kExitError;
}

// Solver answers next to exhaustive enumeration on a small instance.
int cmd_oracle(const Settings& s) {
  const auto inst = load_with_overrides(s);
  const int n = static_cast<int>(inst.legs.size());
  if (n > kOracleMaxLegs)
    throw CliError("oracle enumeration is limited to " + std::to_string(kOracleMaxLegs) + " legs, instance has " +
                   std::to_string(n));
  const auto conns = build_connections(inst);
  bool agree = true;
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-6; };
  Json j;
  j["legs"] = n;

  const auto graph = build_routing_graph(inst, conns);
  const auto rt = oracle::routing_truth(inst);
  const auto [min_air, witness] = minimize_aircraft(graph);
  const auto routed = solve_routing(graph, inst.rules.fleet_size);
  const bool oracle_routable = rt.any_cover && rt.min_aircraft <= inst.rules.fleet_size;
  const bool routing_ok = min_air == rt.min_aircraft && (routed.status == RoutingStatus::Feasible) == oracle_routable;
  agree = agree && routing_ok;
  j["routing"] = {{"min_aircraft", min_air},
                  {"oracle_min_aircraft", rt.min_aircraft},
                  {"feasible", routed.status == RoutingStatus::Feasible},
                  {"oracle_feasible", oracle_routable},
                  {"agree", routing_ok}};

  const auto pairings = oracle::enumerate_pairings(inst);
  const auto pt = oracle::best_partition(inst, pairings);
  const auto cp = solve_crew_pairing(inst, conns, pairing_options(inst, s));
  const bool cp_feasible = cp.status == CrewPairingStatus::Optimal;
  const bool pairing_ok = cp_feasible == pt.feasible && (!pt.feasible || same(cp.objective, pt.cost));
  agree = agree && pairing_ok;
  j["pairing"] = {{"legal_pairings", pairings.size()},
                  {"objective", cp_feasible ? Json(cp.objective) : Json(nullptr)},
                  {"oracle_objective", pt.feasible ? Json(pt.cost) : Json(nullptr)},
                  {"agree", pairing_ok}};

  if (n <= kJointOracleMaxLegs) {
    const auto it = oracle::integrated_truth(inst);
    IntegratedOptions o;
    o.gamma = 1.0;
    o.pairing = pairing_options(inst, s);
    const auto ir = solve_integrated(inst, conns, o);
    const bool converged = ir.status == IntegratedStatus::Converged;
    const bool int_ok = converged == it.feasible && (!it.feasible || same(ir.objective, it.cost));
    agree = agree && int_ok;
    j["integrated"] = {{"objective", converged ? Json(ir.objective) : Json(nullptr)},
                       {"oracle_objective", it.feasible ? Json(it.cost) : Json(nullptr)},
                       {"iterations", ir.iterations},
                       {"agree", int_ok}};
  }
  j["agree"] = agree;
  write_report(s, j);
  if (!agree) throw CliError("solver and brute force disagree");
  return kExitSolved;
}

int cmd_report(const Settings& s) {
  std::ifstream in(s.instance_path, std::ios::binary);
  if (!in) throw CliError("cannot read " + s.instance_path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json report;
  try {
    report = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw CliError(s.instance_path + ": " + e.what());
  }
  write_report(s, report);
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  CLI::App app{"Aircraft routing and crew pairing solvers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", s.seed, "Random seed");
  app.add_option("--jobs", s.jobs, "Parallel pricing windows")->check(CLI::Range(1, 64));
  app.add_option("-o,--output", s.output, "Write the result here instead of stdout");
  app.add_flag("--stats", s.stats, "Add deterministic solver counters to the report");
  app.add_flag("--timing", s.timing, "Add wall-clock times and time fractions to the report");
  app.add_option("--limit-nodes", s.limit_nodes, "Branch-and-bound node limit, 0 for none")->check(CLI::NonNegativeNumber);
  app.add_option("--limit-paths", s.limit_paths, "Column limit of the final enumeration")->check(CLI::PositiveNumber);
  app.add_option("--format", s.format, "Report format: json, csv or table");

  auto* gen = app.add_subcommand("generate", "Write a synthetic instance");
  gen->add_option("--legs", s.legs, "Number of flight legs")->required()->check(CLI::PositiveNumber);
  gen->add_option("--aircraft", s.aircraft, "Fleet size")->check(CLI::PositiveNumber);
  gen->add_option("--airports", s.airports, "Number of airports")->check(CLI::Range(2, 26));
  gen->add_option("--bases", s.bases, "Number of base airports")->check(CLI::PositiveNumber);
  gen->add_option("--name", s.name, "Instance name");

  auto add_solver = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("instance", s.instance_path, "Instance JSON")->required();
    c->add_option("--kappa", s.kappa, "Bound-set size cap per vertex, or auto");
    c->add_option("--alpha", s.alpha, "Long-pairing ratio cap");
    c->add_option("--beta", s.beta, "Long-duty ratio cap");
    return c;
  };
  auto* route = add_solver("route", "Maintenance routing");
  auto* pair = add_solver("pair", "Crew pairing by column generation");
  auto* integ = add_solver("integrated", "Crew pairing and routing with short-connection cuts");
  integ->add_option("--gamma", s.gamma, "Cut strength in (0,1]");
  integ->add_option("--iterations", s.iteration_limit, "Iteration cap")->check(CLI::PositiveNumber);
  auto* orc = add_solver("oracle", "Compare the solvers with brute force on a small instance");
  auto* rep = app.add_subcommand("report", "Re-render a JSON report");
  rep->add_option("report", s.instance_path, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << "\n";
    return kExitError;
  }

  try {
    parse_report_format(s.format);
    if (*gen) return cmd_generate(s);
    if (*route) return cmd_route(s);
    if (*pair) return cmd_pair(s);
    if (*integ) return cmd_integrated(s);
    if (*orc) return cmd_oracle(s);
    if (*rep) return cmd_report(s);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << "\n";
    return kExitError;
  }
  return kExitError;
}
