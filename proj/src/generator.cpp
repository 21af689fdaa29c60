#include "aircrew/instance.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace aircrew {

namespace {

constexpr std::array<const char*, 24> kCodes = {"CDG", "ORY", "LYS", "NCE", "TLS", "MRS", "BOD", "NTE",
                                                "MPL", "BIA", "BES", "SXB", "AJA", "BIQ", "PUF", "RNS",
                                                "CFE", "LIL", "PGF", "TLN", "FSC", "LRH", "PIS", "ETZ"};

std::string airport_code(int i) {
  if (i < static_cast<int>(kCodes.size())) return kCodes[i];
  return "X" + std::to_string(i);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  // Inclusive range; avoids implementation-defined distribution objects.
  int uniform(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(int percent) { return uniform(0, 99) < percent; }

 private:
  std::mt19937_64 eng_;
};

struct RawLeg {
  int dep_airport, arr_airport;
  Minutes dep, arr;
};

}  // namespace

ProblemInstance generate_instance(const GeneratorParams& p) {
  if (p.legs < 2) throw ValidationError("generator: legs must be >= 2");
  if (p.bases < 1) throw ValidationError("generator: bases must be >= 1");
  if (p.airports < 2) throw ValidationError("generator: at least two airports are required");
  if (p.bases > p.airports) throw ValidationError("generator: more bases than airports");
  if (p.fleet_size < 1) throw ValidationError("generator: fleet size must be >= 1");

  Rng rng(p.seed);
  ProblemInstance inst;
  inst.name = p.name.empty() ? "gen-" + std::to_string(p.legs) + "-s" + std::to_string(p.seed) : p.name;
  for (int i = 0; i < p.airports; ++i) {
    Airport a;
    a.code = airport_code(i);
    a.is_base = i < p.bases;
    inst.airports.push_back(a);
  }

  RulesConfig& r = inst.rules;
  r.maintenance_period_days = 3;
  r.fleet_size = p.fleet_size;
  r.flying_limits = {{0, 6, 480}, {6, 13, 600}, {13, 18, 540}, {18, 24, 480}};
  r.short_band_air = 30;
  r.short_band_crew = 60;
  r.alpha = 0.5;
  r.beta = 0.5;

  const int pairs = (p.legs + 1) / 2;
  std::vector<RawLeg> raw;
  for (int k = 0; k < pairs; ++k) {
    const int day = k % 7;
    const int base = rng.uniform(0, p.bases - 1);
    int dest = rng.uniform(0, p.airports - 2);
    if (dest >= base) ++dest;
    const int fly_out = rng.uniform(10, 30) * 5;
    const int fly_back = std::clamp(fly_out + rng.uniform(-2, 2) * 5, 40, 160);
    if (rng.chance(20)) {
      // Evening departure, next-morning return: the aircraft sleeps away from base.
      const Minutes out = day * kDayMinutes + rng.uniform(17 * 12, 20 * 12) * 5;
      const int next = (day + 1) % 7;
      const Minutes back = next * kDayMinutes + rng.uniform(6 * 12, 9 * 12) * 5;
      raw.push_back({base, dest, out, out + fly_out});
      raw.push_back({dest, base, back, back + fly_back});
    } else {
      const Minutes out = day * kDayMinutes + rng.uniform(6 * 12, 16 * 12) * 5;
      const Minutes turn = rng.uniform(r.short_band_air / 5, (r.short_band_crew + 90) / 5) * 5;
      const Minutes back = out + fly_out + turn;
      raw.push_back({base, dest, out, out + fly_out});
      raw.push_back({dest, base, back, back + fly_back});
    }
  }
  std::stable_sort(raw.begin(), raw.end(), [](const RawLeg& a, const RawLeg& b) {
    return a.dep != b.dep ? a.dep < b.dep : a.dep_airport < b.dep_airport;
  });
  for (std::size_t i = 0; i < raw.size(); ++i) {
    FlightLeg l;
    l.id = static_cast<int>(i);
    l.dep_airport = raw[i].dep_airport;
    l.arr_airport = raw[i].arr_airport;
    l.dep_time = raw[i].dep;
    l.arr_time = raw[i].arr;
    inst.legs.push_back(l);
  }
  validate(inst);
  return inst;
}

}  // namespace aircrew
