#include "aircrew/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace aircrew {

using json = nlohmann::ordered_json;

Minutes RulesConfig::flying_limit_at(Minutes t) const {
  const int hour = (t % kDayMinutes) / 60;
  for (const auto& fl : flying_limits) {
    if (hour >= fl.from_hour && hour < fl.to_hour) return fl.limit_minutes;
  }
  return 0;
}

Minutes RulesConfig::flying_limit_max() const {
  Minutes m = 0;
  for (const auto& fl : flying_limits) m = std::max(m, fl.limit_minutes);
  return m;
}

int ProblemInstance::airport_index(const std::string& code) const {
  for (std::size_t i = 0; i < airports.size(); ++i) {
    if (airports[i].code == code) return static_cast<int>(i);
  }
  return -1;
}

const char* to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::AirplaneOnly: return "airplane-only";
    case ConnectionKind::Short: return "short";
    case ConnectionKind::DayCrew: return "day-crew";
    case ConnectionKind::NightCrew: return "night-crew";
  }
  return "?";
}

Minutes cyclic_gap(Minutes a, Minutes b) {
  Minutes g = (b - a) % kWeekMinutes;
  return g < 0 ? g + kWeekMinutes : g;
}

int midnights_in(Minutes from, Minutes length) {
  return (from + length) / kDayMinutes - from / kDayMinutes;
}

std::optional<Connection> classify_connection(const ProblemInstance& inst, const FlightLeg& from,
                                              const FlightLeg& to) {
  if (from.id == to.id || from.arr_airport != to.dep_airport) return std::nullopt;
  const RulesConfig& r = inst.rules;
  const Airport& ap = inst.airports[from.arr_airport];
  const Minutes t_air = std::max(r.short_band_air, ap.min_airplane_turn);
  const Minutes t_crew = std::max(r.short_band_crew, ap.min_crew_change);

  Connection c;
  c.from_leg = from.id;
  c.to_leg = to.id;
  c.ground_minutes = cyclic_gap(from.arr_time, to.dep_time);
  if (c.ground_minutes < t_air) return std::nullopt;
  c.midnights_crossed = midnights_in(from.arr_time, c.ground_minutes);
  if (c.midnights_crossed == 0) {
    c.kind = c.ground_minutes < t_crew ? ConnectionKind::Short : ConnectionKind::DayCrew;
  } else if (c.midnights_crossed >= r.max_pairing_days) {
    c.kind = ConnectionKind::AirplaneOnly;
  } else {
    c.kind = ConnectionKind::NightCrew;
    c.is_reduced_rest = c.ground_minutes < r.reduced_rest_threshold;
  }
  return c;
}

std::vector<Connection> build_connections(const ProblemInstance& inst) {
  std::vector<Connection> out;
  for (const auto& a : inst.legs) {
    for (const auto& b : inst.legs) {
      if (auto c = classify_connection(inst, a, b)) out.push_back(*c);
    }
  }
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void validate_rules(const RulesConfig& r) {
  if (r.maintenance_period_days < 1) fail("rules.T must be >= 1");
  if (r.fleet_size < 1) fail("rules.n_a must be >= 1");
  if (r.max_legs_per_duty < 1) fail("rules.max_legs_per_duty must be >= 1");
  if (r.reduced_rest_max_legs < 1 || r.reduced_rest_max_legs > r.max_legs_per_duty)
    fail("rules.reduced_rest_max_legs must lie in [1, max_legs_per_duty]");
  if (r.reduced_rest_threshold < 0) fail("rules.reduced_rest_threshold must be >= 0");
  if (r.short_band_air < 0 || r.short_band_air > r.short_band_crew)
    fail("rules.short_band must satisfy 0 <= t_air <= t_crew");
  if (r.alpha < 0 || r.alpha > 1) fail("rules.alpha must lie in [0,1]");
  if (r.beta < 0 || r.beta > 1) fail("rules.beta must lie in [0,1]");
  if (!(r.gamma > 0) || r.gamma > 1) fail("rules.gamma must lie in (0,1]");
  if (r.kappa && *r.kappa < 1) fail("rules.kappa must be >= 1 or \"auto\"");
  if (r.max_pairing_days < 1 || r.max_pairing_days > 7) fail("rules.max_pairing_days must lie in [1,7]");
  if (r.weights.w_fly < 0 || r.weights.w_hotel < 0 || r.weights.w_pairing < 0)
    fail("rules.weights must be non-negative");
  std::vector<int> covered(24, 0);
  for (const auto& fl : r.flying_limits) {
    if (fl.from_hour < 0 || fl.to_hour > 24 || fl.from_hour >= fl.to_hour)
      fail("rules.F_table entry has an invalid hour range");
    if (fl.limit_minutes <= 0) fail("rules.F_table limits must be positive");
    for (int h = fl.from_hour; h < fl.to_hour; ++h) ++covered[h];
  }
  for (int h = 0; h < 24; ++h) {
    if (covered[h] != 1) fail("rules.F_table must cover every hour exactly once (hour " + std::to_string(h) + ")");
  }
}

}  // namespace

void validate(const ProblemInstance& inst) {
  validate_rules(inst.rules);
  std::set<std::string> codes;
  bool any_base = false;
  for (const auto& a : inst.airports) {
    if (a.code.empty()) fail("airport code must be non-empty");
    if (!codes.insert(a.code).second) fail("duplicate airport code " + a.code);
    if (a.min_airplane_turn < 0) fail("airport " + a.code + ": min_airplane_turn must be >= 0");
    if (a.min_crew_change < a.min_airplane_turn)
      fail("airport " + a.code + ": min_crew_change must be >= min_airplane_turn");
    any_base = any_base || a.is_base;
  }
  if (!any_base) fail("at least one base airport is required");
  const int n_air = static_cast<int>(inst.airports.size());
  for (std::size_t i = 0; i < inst.legs.size(); ++i) {
    const auto& l = inst.legs[i];
    const std::string tag = "leg " + std::to_string(l.id);
    if (l.id != static_cast<int>(i)) fail("leg ids must be dense 0..|L|-1 (found " + tag + " at position " + std::to_string(i) + ")");
    if (l.dep_airport < 0 || l.dep_airport >= n_air || l.arr_airport < 0 || l.arr_airport >= n_air)
      fail(tag + ": unknown airport");
    if (l.dep_airport == l.arr_airport) fail(tag + ": departure and arrival airports coincide");
    if (l.dep_time < 0 || l.dep_time >= kWeekMinutes || l.arr_time < 0 || l.arr_time >= kWeekMinutes)
      fail(tag + ": times must lie in [0, 10080)");
    if (l.arr_time <= l.dep_time) fail(tag + ": arrival before departure");
    if (l.arr_time / kDayMinutes != l.dep_time / kDayMinutes) fail(tag + ": leg crosses midnight");
  }
}

namespace {

template <class T>
T get_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  if (!obj.is_object()) throw ParseError(std::string(where) + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ParseError("unknown key '" + it.key() + "' in " + where);
  }
}

RulesConfig parse_rules(const json& j) {
  reject_unknown(j,
                 {"T", "n_a", "max_legs_per_duty", "reduced_rest_max_legs", "reduced_rest_threshold", "F_table",
                  "short_band", "alpha", "beta", "gamma", "kappa", "max_pairing_days", "weights"},
                 "rules");
  RulesConfig r;
  r.maintenance_period_days = get_field<int>(j, "T");
  r.fleet_size = get_field<int>(j, "n_a");
  r.max_legs_per_duty = get_field<int>(j, "max_legs_per_duty");
  r.reduced_rest_max_legs = get_field<int>(j, "reduced_rest_max_legs");
  r.reduced_rest_threshold = get_field<int>(j, "reduced_rest_threshold");
  r.flying_limits.clear();
  const json& ft = j.at("F_table");
  if (!ft.is_array()) throw ParseError("F_table must be an array");
  for (const auto& e : ft) {
    reject_unknown(e, {"from_hour", "to_hour", "limit_minutes"}, "F_table entry");
    r.flying_limits.push_back(
        {get_field<int>(e, "from_hour"), get_field<int>(e, "to_hour"), get_field<int>(e, "limit_minutes")});
  }
  const auto band = get_field<std::vector<int>>(j, "short_band");
  if (band.size() != 2) throw ParseError("short_band must have two entries");
  r.short_band_air = band[0];
  r.short_band_crew = band[1];
  r.alpha = get_field<double>(j, "alpha");
  r.beta = get_field<double>(j, "beta");
  r.gamma = get_field<double>(j, "gamma");
  const json& k = j.at("kappa");
  if (k.is_string()) {
    if (k.get<std::string>() != "auto") throw ParseError("kappa must be an integer or \"auto\"");
    r.kappa.reset();
  } else if (k.is_number_integer()) {
    r.kappa = k.get<int>();
  } else {
    throw ParseError("kappa must be an integer or \"auto\"");
  }
  r.max_pairing_days = get_field<int>(j, "max_pairing_days");
  const json& w = j.at("weights");
  reject_unknown(w, {"w_fly", "w_hotel", "w_pairing"}, "weights");
  r.weights = {get_field<double>(w, "w_fly"), get_field<double>(w, "w_hotel"), get_field<double>(w, "w_pairing")};
  return r;
}

json rules_to_json(const RulesConfig& r) {
  json j;
  j["T"] = r.maintenance_period_days;
  j["n_a"] = r.fleet_size;
  j["max_legs_per_duty"] = r.max_legs_per_duty;
  j["reduced_rest_max_legs"] = r.reduced_rest_max_legs;
  j["reduced_rest_threshold"] = r.reduced_rest_threshold;
  json ft = json::array();
  for (const auto& fl : r.flying_limits) {
    json e;
    e["from_hour"] = fl.from_hour;
    e["to_hour"] = fl.to_hour;
    e["limit_minutes"] = fl.limit_minutes;
    ft.push_back(e);
  }
  j["F_table"] = ft;
  j["short_band"] = json::array({r.short_band_air, r.short_band_crew});
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["gamma"] = r.gamma;
  if (r.kappa) j["kappa"] = *r.kappa; else j["kappa"] = "auto";
  j["max_pairing_days"] = r.max_pairing_days;
  json w;
  w["w_fly"] = r.weights.w_fly;
  w["w_hotel"] = r.weights.w_hotel;
  w["w_pairing"] = r.weights.w_pairing;
  j["weights"] = w;
  return j;
}

}  // namespace

ProblemInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(j, {"name", "airports", "legs", "rules"}, "instance");
  ProblemInstance inst;
  try {
    inst.name = get_field<std::string>(j, "name");
    for (const auto& a : j.at("airports")) {
      reject_unknown(a, {"code", "is_base", "min_airplane_turn", "min_crew_change"}, "airport");
      inst.airports.push_back({get_field<std::string>(a, "code"), get_field<bool>(a, "is_base"),
                               get_field<int>(a, "min_airplane_turn"), get_field<int>(a, "min_crew_change")});
    }
    for (const auto& l : j.at("legs")) {
      reject_unknown(l, {"id", "dep_airport", "arr_airport", "dep_time", "arr_time"}, "leg");
      FlightLeg leg;
      leg.id = get_field<int>(l, "id");
      const auto dep = get_field<std::string>(l, "dep_airport");
      const auto arr = get_field<std::string>(l, "arr_airport");
      leg.dep_airport = inst.airport_index(dep);
      leg.arr_airport = inst.airport_index(arr);
      if (leg.dep_airport < 0) throw ValidationError("leg " + std::to_string(leg.id) + ": unknown airport " + dep);
      if (leg.arr_airport < 0) throw ValidationError("leg " + std::to_string(leg.id) + ": unknown airport " + arr);
      leg.dep_time = get_field<int>(l, "dep_time");
      leg.arr_time = get_field<int>(l, "arr_time");
      inst.legs.push_back(leg);
    }
    inst.rules = parse_rules(j.at("rules"));
  } catch (const json::out_of_range& e) {
    throw ParseError(std::string("missing key: ") + e.what());
  } catch (const json::type_error& e) {
    throw ParseError(std::string("wrong type: ") + e.what());
  }
  validate(inst);
  return inst;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string dump_instance(const ProblemInstance& inst) {
  json j;
  j["name"] = inst.name;
  json aps = json::array();
  for (const auto& a : inst.airports) {
    json e;
    e["code"] = a.code;
    e["is_base"] = a.is_base;
    e["min_airplane_turn"] = a.min_airplane_turn;
    e["min_crew_change"] = a.min_crew_change;
    aps.push_back(e);
  }
  j["airports"] = aps;
  json legs = json::array();
  for (const auto& l : inst.legs) {
    json e;
    e["id"] = l.id;
    e["dep_airport"] = inst.airports[l.dep_airport].code;
    e["arr_airport"] = inst.airports[l.arr_airport].code;
    e["dep_time"] = l.dep_time;
    e["arr_time"] = l.arr_time;
    legs.push_back(e);
  }
  j["legs"] = legs;
  j["rules"] = rules_to_json(inst.rules);
  return j.dump(2) + "\n";
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << dump_instance(inst);
}

}  // namespace aircrew
