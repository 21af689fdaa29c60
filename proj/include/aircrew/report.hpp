#pragma once
// JSON reports for the three solvers and their re-rendering as text tables or CSV.
// Wall-clock fields are opt-in so that the default reports are reproducible byte for byte.

#include <string>

#include <json.hpp>

#include "aircrew/integrated.hpp"
#include "aircrew/pairing.hpp"
#include "aircrew/routing.hpp"

namespace aircrew {

using Json = nlohmann::ordered_json;

struct ReportOptions {
  bool stats = false;   // deterministic counters (iterations, paths, cuts, nodes)
  bool timing = false;  // milliseconds and time fractions
};

Json routing_report(const ProblemInstance& inst, const RoutingSolution& sol, const ReportOptions& opts = {});
Json pairing_report(const ProblemInstance& inst, const CrewPairingResult& res, const ReportOptions& opts = {});
Json integrated_report(const ProblemInstance& inst, const std::vector<Connection>& connections,
                       const IntegratedResult& res, const ReportOptions& opts = {});

/// Per-solve pricing statistics in the layout of the labeling engine's export.
Json pricing_stats_json(const PricingStats& stats, const std::vector<int>& kappas);

enum class ReportFormat { Json, Csv, Table };
/// Throws std::invalid_argument for an unknown name.
ReportFormat parse_report_format(const std::string& name);

/// Flattens a report into (path, value) rows: objects by key, arrays by index, except that
/// arrays of scalars stay on one row as compact JSON.
std::string render_report(const Json& report, ReportFormat format);

}  // namespace aircrew
