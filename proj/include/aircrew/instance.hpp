#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aircrew {

/// Integer minutes since Monday 00:00 of the canonical week.
using Minutes = int;

inline constexpr Minutes kDayMinutes = 1440;
inline constexpr Minutes kWeekMinutes = 7 * kDayMinutes;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Airport {
  std::string code;
  bool is_base = false;
  Minutes min_airplane_turn = 0;
  Minutes min_crew_change = 0;
};

struct FlightLeg {
  int id = 0;
  int dep_airport = 0;  // index into ProblemInstance::airports
  int arr_airport = 0;
  Minutes dep_time = 0;
  Minutes arr_time = 0;

  Minutes flying_minutes() const { return arr_time - dep_time; }
  int day() const { return dep_time / kDayMinutes; }
  int dep_hour() const { return (dep_time % kDayMinutes) / 60; }
};

/// Duty flying limit for duties whose first leg departs in [from_hour, to_hour).
struct FlyingLimit {
  int from_hour = 0;
  int to_hour = 24;
  Minutes limit_minutes = 0;
};

struct CostWeights {
  double w_fly = 1.0;
  double w_hotel = 100.0;
  double w_pairing = 300.0;
};

struct RulesConfig {
  int maintenance_period_days = 3;  // T
  int fleet_size = 1;               // n_a
  int max_legs_per_duty = 4;
  int reduced_rest_max_legs = 3;
  Minutes reduced_rest_threshold = 600;
  std::vector<FlyingLimit> flying_limits{{0, 24, 600}};
  Minutes short_band_air = 30;   // t_air
  Minutes short_band_crew = 60;  // t_crew
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.9;
  std::optional<int> kappa;  // nullopt means "auto"
  int max_pairing_days = 4;
  CostWeights weights;

  /// F(t) for a leg departing at minute-of-week `t`.
  Minutes flying_limit_at(Minutes t) const;
  /// F_max, the largest entry of the flying-limit table.
  Minutes flying_limit_max() const;
};

struct ProblemInstance {
  std::string name;
  std::vector<Airport> airports;
  std::vector<FlightLeg> legs;
  RulesConfig rules;

  const Airport& dep_airport(const FlightLeg& l) const { return airports[l.dep_airport]; }
  const Airport& arr_airport(const FlightLeg& l) const { return airports[l.arr_airport]; }
  int airport_index(const std::string& code) const;  // -1 if unknown
};

enum class ConnectionKind { AirplaneOnly, Short, DayCrew, NightCrew };

const char* to_string(ConnectionKind k);

struct Connection {
  int from_leg = 0;
  int to_leg = 0;
  ConnectionKind kind = ConnectionKind::AirplaneOnly;
  Minutes ground_minutes = 0;
  int midnights_crossed = 0;
  bool is_reduced_rest = false;

  bool crew_usable() const { return kind != ConnectionKind::AirplaneOnly; }
  bool is_short() const { return kind == ConnectionKind::Short; }
};

/// (b - a) mod one week, in [0, kWeekMinutes).
Minutes cyclic_gap(Minutes a, Minutes b);

/// Number of midnights inside the half-open interval (from, from + length].
int midnights_in(Minutes from, Minutes length);

/// Classifies the ordered pair (from, to); nullopt when no airplane can make it.
std::optional<Connection> classify_connection(const ProblemInstance& inst, const FlightLeg& from,
                                              const FlightLeg& to);

/// All connections ordered by (from_leg, to_leg).
std::vector<Connection> build_connections(const ProblemInstance& inst);

/// Throws ValidationError naming the first violated invariant.
void validate(const ProblemInstance& inst);

ProblemInstance parse_instance(const std::string& json_text);
ProblemInstance load_instance(const std::filesystem::path& path);
std::string dump_instance(const ProblemInstance& inst);
void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);

struct GeneratorParams {
  int airports = 6;
  int bases = 2;
  int legs = 40;
  int fleet_size = 3;
  std::uint64_t seed = 1;
  std::string name;
};

/// Deterministic synthetic instance built from base-anchored out-and-back rotations.
ProblemInstance generate_instance(const GeneratorParams& params);

}  // namespace aircrew
