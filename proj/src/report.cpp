#include "aircrew/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aircrew {

namespace {

Json leg_ids(const ProblemInstance& inst, const std::vector<int>& legs) {
  Json out = Json::array();
  for (int l : legs) out.push_back(inst.legs[l].id);
  return out;
}

double frac(double part, double total) { return total > 0.0 ? part / total : 0.0; }

Json pairings_json(const ProblemInstance& inst, const std::vector<Pairing>& pairings) {
  Json out = Json::array();
  for (const auto& p : pairings) {
    Json duties = Json::array();
    for (const auto& d : p.duties) duties.push_back(leg_ids(inst, d));
    out.push_back({{"legs", leg_ids(inst, p.legs)}, {"cost", p.cost}, {"is_long", p.is_long}, {"duties", duties}});
  }
  return out;
}

Json routes_json(const ProblemInstance& inst, const RoutingSolution& sol) {
  Json out = Json::array();
  for (const auto& r : sol.routes) out.push_back(leg_ids(inst, r.legs));
  return out;
}

Json crossings_json(const RoutingSolution& sol) {
  Json out = Json::array();
  for (const auto& r : sol.routes) out.push_back(r.week_span);
  return out;
}

bool is_scalar_array(const Json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return !e.is_structured(); });
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), rows);
  } else if (j.is_array() && !is_scalar_array(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(path, j.get<std::string>());
  } else {
    rows.emplace_back(path, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

Json pricing_stats_json(const PricingStats& stats, const std::vector<int>& kappas) {
  return {{"solves", stats.solves},
          {"paths_enumerated", stats.paths_enumerated},
          {"cut_dom", stats.cut_dom},
          {"cut_low", stats.cut_low},
          {"cut_infeasible", stats.cut_infeasible},
          {"kappa", kappas}};
}

Json routing_report(const ProblemInstance& inst, const RoutingSolution& sol, const ReportOptions& opts) {
  Json j;
  j["status"] = to_string(sol.status);
  j["aircraft_used"] = sol.aircraft_used;
  j["routes"] = routes_json(inst, sol);
  j["a0_crossings"] = crossings_json(sol);
  if (!sol.uncoverable_legs.empty()) j["uncoverable_legs"] = leg_ids(inst, sol.uncoverable_legs);
  if (opts.stats) j["stats"] = {{"nodes", sol.nodes}, {"selected_arcs", sol.selected_arcs.size()}};
  return j;
}

Json pairing_report(const ProblemInstance& inst, const CrewPairingResult& res, const ReportOptions& opts) {
  Json j;
  j["status"] = to_string(res.status);
  j["pairings"] = pairings_json(inst, res.pairings);
  j["c_LB"] = res.c_lb;
  j["objective"] = res.objective;
  j["provably_optimal"] = res.provably_optimal;
  if (!res.uncovered_legs.empty()) j["uncovered_legs"] = leg_ids(inst, res.uncovered_legs);
  const auto& st = res.stats;
  if (opts.stats) {
    j["stats"] = {{"cg_iterations", st.cg_iterations},
                  {"columns_generated", st.columns_generated},
                  {"completion_columns", st.completion_columns},
                  {"completion_truncated", res.completion_truncated},
                  {"pricing", pricing_stats_json(st.pricing, st.kappas)}};
  }
  if (opts.timing) {
    j["timing"] = {{"pricing_time_frac", frac(st.pricing_ms, st.total_ms)},
                   {"lp_time_frac", frac(st.lp_ms, st.total_ms)},
                   {"mip_time_frac", frac(st.mip_ms, st.total_ms)},
                   {"bound_build_ms", st.pricing.bound_build_ms},
                   {"total_ms", st.total_ms}};
  }
  return j;
}

Json integrated_report(const ProblemInstance& inst, const std::vector<Connection>& connections,
                       const IntegratedResult& res, const ReportOptions& opts) {
  Json j;
  j["status"] = to_string(res.status);
  j["objective"] = res.objective;
  j["lower_bound"] = res.lower_bound;
  j["gap"] = res.gap;
  j["integ_steps"] = res.iterations;
  j["cg_iter_total"] = res.cg_iterations_total;
  Json shorts = Json::array();
  for (int c : short_connections_of(res.pairing.pairings))
    shorts.push_back({inst.legs[connections[c].from_leg].id, inst.legs[connections[c].to_leg].id});
  j["short_connections"] = shorts;
  j["pairings"] = pairings_json(inst, res.pairing.pairings);
  j["routes"] = routes_json(inst, res.routing);
  j["a0_crossings"] = crossings_json(res.routing);
  if (opts.stats) {
    Json log = Json::array();
    for (const auto& it : res.log) {
      log.push_back({{"iteration", it.iteration},
                     {"short_connections", it.short_connections.size()},
                     {"pairing_objective", it.pairing_objective},
                     {"cg_iterations", it.cg_iterations},
                     {"routing_status", to_string(it.routing_status)}});
    }
    j["stats"] = {{"cuts", res.cuts.size()}, {"iterations", log}};
  }
  if (opts.timing) {
    j["timing"] = {{"cp_cg_time_frac", frac(res.pairing_ms, res.total_ms)},
                   {"cp_mip_time_frac", frac(res.mip_ms, res.total_ms)},
                   {"ar_time_frac", frac(res.routing_ms, res.total_ms)},
                   {"total_time_ms", res.total_ms}};
  }
  return j;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "table") return ReportFormat::Table;
  throw std::invalid_argument("unknown report format '" + name + "' (json, csv or table)");
}

std::string render_report(const Json& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "field,value\n";
    for (const auto& [k, v] : rows) out << csv_field(k) << ',' << csv_field(v) << '\n';
    return out.str();
  }
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return out.str();
}

}  // namespace aircrew
