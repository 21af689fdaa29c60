#include "doctest.h"

#include <set>

#include "aircrew/instance.hpp"

using namespace aircrew;

namespace {

ProblemInstance three_airports() {
  ProblemInstance inst;
  inst.name = "abc";
  inst.airports = {{"A", true, 0, 0}, {"B", false, 0, 0}, {"C", true, 0, 0}};
  inst.rules.flying_limits = {{0, 24, 600}};
  return inst;
}

FlightLeg leg(int id, int from, int to, Minutes dep, Minutes arr) { return {id, from, to, dep, arr}; }

}  // namespace

TEST_CASE("toy file loads") {
  const auto inst = load_instance("data/toy2.json");
  CHECK(inst.legs.size() == 2);
  CHECK(inst.rules.fleet_size == 1);
  CHECK(inst.rules.maintenance_period_days == 3);
  CHECK(inst.airports[0].is_base);
  CHECK(inst.rules.flying_limit_max() == 600);
  CHECK(inst.rules.flying_limit_at(480) == 600);
  CHECK(inst.rules.flying_limit_at(19 * 60) == 480);
  CHECK_FALSE(inst.rules.kappa.has_value());
}

TEST_CASE("validation errors name the violated invariant") {
  auto message = [](const char* path) -> std::string {
    try {
      load_instance(path);
    } catch (const ValidationError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("data/bad_order.json").find("arrival before departure") != std::string::npos);
  CHECK(message("data/bad_midnight.json").find("crosses midnight") != std::string::npos);
  CHECK(message("data/bad_airport.json").find("unknown airport") != std::string::npos);
  CHECK_THROWS_AS(load_instance("data/bad_key.json"), ParseError);
  CHECK_THROWS_AS(load_instance("data/bad_syntax.json"), ParseError);
  CHECK_THROWS_AS(load_instance("data/does_not_exist.json"), ParseError);
}

TEST_CASE("round trip is byte identical") {
  const auto inst = load_instance("data/toy2.json");
  const std::string once = dump_instance(inst);
  CHECK(dump_instance(parse_instance(once)) == once);
  const auto gen = generate_instance({6, 2, 40, 3, 7, ""});
  const std::string g = dump_instance(gen);
  CHECK(dump_instance(parse_instance(g)) == g);
}

TEST_CASE("connection below the airplane minimum is absent") {
  auto inst = three_airports();
  inst.legs = {leg(0, 0, 1, 540, 600), leg(1, 1, 2, 620, 700)};
  inst.rules.short_band_air = 30;
  inst.rules.short_band_crew = 60;
  for (const auto& c : build_connections(inst)) CHECK_FALSE((c.from_leg == 0 && c.to_leg == 1));
}

TEST_CASE("band rule yields a short connection") {
  auto inst = three_airports();
  inst.legs = {leg(0, 0, 1, 540, 600), leg(1, 1, 2, 620, 700)};
  inst.rules.short_band_air = 15;
  inst.rules.short_band_crew = 45;
  const auto cs = build_connections(inst);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].kind == ConnectionKind::Short);
  CHECK(cs[0].ground_minutes == 20);
  CHECK(cs[0].midnights_crossed == 0);
}

TEST_CASE("overnight connection with reduced rest") {
  auto inst = three_airports();
  inst.legs = {leg(0, 0, 1, 20 * 60, 22 * 60), leg(1, 1, 2, kDayMinutes + 7 * 60, kDayMinutes + 8 * 60)};
  inst.rules.reduced_rest_threshold = 600;
  const auto cs = build_connections(inst);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].kind == ConnectionKind::NightCrew);
  CHECK(cs[0].midnights_crossed == 1);
  CHECK(cs[0].ground_minutes == 540);
  CHECK(cs[0].is_reduced_rest);
}

TEST_CASE("connections wrap around the week") {
  auto inst = three_airports();
  inst.legs = {leg(0, 1, 0, 6 * kDayMinutes + 600, 6 * kDayMinutes + 700), leg(1, 0, 1, 480, 560)};
  const auto cs = build_connections(inst);
  REQUIRE(cs.size() == 2);
  // Sunday arrival to Monday departure crosses one midnight.
  CHECK(cs[0].from_leg == 0);
  CHECK(cs[0].ground_minutes == kWeekMinutes - 6 * kDayMinutes - 700 + 480);
  CHECK(cs[0].midnights_crossed == 1);
  CHECK(cs[0].kind == ConnectionKind::NightCrew);
}

TEST_CASE("long gaps are airplane-only") {
  auto inst = three_airports();
  inst.legs = {leg(0, 0, 1, 480, 560), leg(1, 1, 0, 5 * kDayMinutes + 480, 5 * kDayMinutes + 560)};
  const auto cs = build_connections(inst);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].midnights_crossed == 5);
  CHECK(cs[0].kind == ConnectionKind::AirplaneOnly);
}

TEST_CASE("classification properties on generated instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = generate_instance({6, 2, 40, 3, seed, ""});
    const auto cs = build_connections(inst);
    int prev_from = -1, prev_to = -1;
    for (const auto& c : cs) {
      CHECK((c.from_leg > prev_from || (c.from_leg == prev_from && c.to_leg > prev_to)));
      prev_from = c.from_leg;
      prev_to = c.to_leg;
      const auto& a = inst.legs[c.from_leg];
      const auto& b = inst.legs[c.to_leg];
      CHECK(c.ground_minutes == ((b.dep_time - a.arr_time) % kWeekMinutes + kWeekMinutes) % kWeekMinutes);
      CHECK(c.ground_minutes >= 0);
      CHECK(c.ground_minutes < kWeekMinutes);
      const auto again = classify_connection(inst, a, b);
      REQUIRE(again.has_value());
      CHECK(again->kind == c.kind);
      if (c.kind == ConnectionKind::Short) CHECK(c.midnights_crossed == 0);
      if (c.kind == ConnectionKind::NightCrew) CHECK(c.midnights_crossed >= 1);
      if (c.is_reduced_rest) CHECK(c.kind == ConnectionKind::NightCrew);
    }
  }
}

TEST_CASE("generator is deterministic and sized as requested") {
  const auto a = generate_instance({6, 2, 40, 3, 7, ""});
  const auto b = generate_instance({6, 2, 40, 3, 7, ""});
  CHECK(dump_instance(a) == dump_instance(b));
  CHECK(a.legs.size() >= 32);
  CHECK(a.legs.size() <= 48);

  const auto big = generate_instance({10, 3, 152, 4, 1, ""});
  CHECK(big.legs.size() == 152);
  CHECK(big.rules.fleet_size == 4);
  const auto n = build_connections(big).size();
  // Same order of magnitude as the reference schedule's 2107 connections.
  CHECK(n >= 211);
  CHECK(n <= 21070);
}

TEST_CASE("generator balances every airport over the week") {
  const auto inst = generate_instance({8, 2, 60, 3, 3, ""});
  std::vector<std::vector<int>> balance(inst.airports.size(), std::vector<int>(7, 0));
  for (const auto& l : inst.legs) {
    ++balance[l.arr_airport][l.day()];
    --balance[l.dep_airport][l.day()];
  }
  // Overnight rotations shift the return to the next day, so compare weekly totals.
  for (std::size_t a = 0; a < inst.airports.size(); ++a) {
    int total = 0;
    for (int d = 0; d < 7; ++d) total += balance[a][d];
    CHECK(total == 0);
  }
}

TEST_CASE("generator rejects impossible parameters") {
  CHECK_THROWS_AS(generate_instance({2, 3, 10, 1, 1, ""}), ValidationError);
  CHECK_THROWS_AS(generate_instance({6, 2, 1, 1, 1, ""}), ValidationError);
  CHECK_THROWS_AS(generate_instance({6, 0, 10, 1, 1, ""}), ValidationError);
}
