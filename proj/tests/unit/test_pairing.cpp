#include <doctest.h>

#include <random>

#include "support/crew_instances.hpp"
#include "support/pairing_checks.hpp"
#include "support/rcsp_harness.hpp"

using namespace aircrew;
using Core = PairingResource::Core;

namespace {

PairingResource multi(int fl, int ff, int ll, int lf, bool reduced = false) {
  PairingResource r;
  r.core = Core::MultiDay;
  r.first_legs = fl;
  r.first_flying = ff;
  r.last_legs = ll;
  r.last_flying = lf;
  r.last_reduced = reduced;
  return r;
}

std::string join_errors(const std::vector<std::string>& errors) {
  std::string s;
  for (std::size_t i = 0; i < errors.size() && i < 6; ++i) s += errors[i] + "\n";
  return s;
}

Minutes at(int day, int hour, int minute = 0) { return day * kDayMinutes + hour * 60 + minute; }

ProblemInstance hand_instance(std::vector<Airport> airports, std::vector<std::tuple<int, int, Minutes, Minutes>> legs) {
  ProblemInstance inst;
  inst.name = "hand";
  inst.airports = std::move(airports);
  for (auto [from, to, dep, arr] : legs) {
    FlightLeg l;
    l.id = static_cast<int>(inst.legs.size());
    l.dep_airport = from;
    l.arr_airport = to;
    l.dep_time = dep;
    l.arr_time = arr;
    inst.legs.push_back(l);
  }
  inst.rules.flying_limits = {{0, 6, 480}, {6, 13, 600}, {13, 18, 540}, {18, 24, 480}};
  validate(inst);
  return inst;
}

Airport airport(const char* code, bool base) {
  Airport a;
  a.code = code;
  a.is_base = base;
  return a;
}

}  // namespace

TEST_CASE("combine of one-day pieces adds legs and flying") {
  PairingAlgebra alg(harness::small_rules());
  auto r = alg.combine(PairingResource::one_day(1, 60), PairingResource::one_day(1, 90));
  CHECK(r.core == Core::OneDay);
  CHECK(r.first_legs == 2);
  CHECK(r.first_flying == 150);
}

TEST_CASE("an overfull middle duty collapses to top") {
  PairingAlgebra alg(harness::small_rules());
  auto r = alg.combine(multi(2, 100, 3, 200), multi(2, 50, 1, 30));
  CHECK(r.core == Core::Top);
  CHECK(alg.infeasible(r));
}

TEST_CASE("a legal middle duty is closed and classified") {
  PairingAlgebra alg(harness::small_rules());
  auto a = multi(1, 60, 1, 30);
  a.night_conns = 1;
  auto b = multi(2, 50, 1, 30);
  b.night_conns = 1;
  auto r = alg.combine(a, b);
  CHECK(r.core == Core::MultiDay);
  CHECK(r.first_legs == 1);
  CHECK(r.first_flying == 60);
  CHECK(r.last_legs == 1);
  CHECK(r.last_flying == 30);
  CHECK(r.long_middle == 0);  // three legs: a short duty
  CHECK(r.night_conns == 2);  // three duties in total
  CHECK(alg.long_duties(r) == 0);

  auto c = alg.combine(multi(1, 60, 2, 30), multi(2, 50, 1, 30));
  CHECK(c.long_middle == 1);  // four legs: long
  // After a reduced rest the last duty carries the cap offset, which is not a real leg.
  auto d = alg.combine(multi(1, 60, 3, 30, true), multi(1, 50, 1, 30));
  CHECK(d.core == Core::MultiDay);
  CHECK(d.long_middle == 0);
  auto e = alg.combine(multi(1, 60, 3, 30, true), multi(2, 50, 1, 30));
  CHECK(e.core == Core::Top);
}

TEST_CASE("infeasibility thresholds") {
  PairingAlgebra alg(harness::small_rules());
  CHECK(alg.infeasible(PairingResource::one_day(5, 100)));
  CHECK_FALSE(alg.infeasible(PairingResource::one_day(4, 600)));
  CHECK(alg.infeasible(PairingResource::one_day(1, 601)));
  CHECK(alg.infeasible(PairingResource::top()));
  CHECK_FALSE(alg.infeasible(PairingResource::bottom()));
  CHECK(alg.infeasible(multi(1, 10, 5, 10)));
}

TEST_CASE("pricing cost with and without side duals") {
  auto rules = harness::small_rules();
  PairingAlgebra plain(rules);
  auto q = PairingResource::one_day(2, 100, 42.5);
  CHECK(plain.cost(q) == doctest::Approx(42.5 - 0.0));

  rules.alpha = 0.2;
  PairingAlgebra with_mu(rules, -10.0, 0.0);
  CHECK(with_mu.cost(with_mu.neutral()) == doctest::Approx(-10.0 * 0.2));
  auto longp = multi(1, 60, 1, 60);
  longp.nights = 3;
  longp.night_conns = 2;
  longp.z = 7.0;
  CHECK(with_mu.cost(longp) == doctest::Approx(7.0 + 10.0 - 2.0));
  CHECK(with_mu.cost(PairingResource::top()) == rcsp::kInfCost);
}

TEST_CASE("beta dual charges long duties against all duties") {
  auto rules = harness::small_rules();
  rules.beta = 0.25;
  PairingAlgebra alg(rules, 0.0, -4.0);
  // first duty 4 legs (long), last duty 1 leg, two duties.
  auto q = multi(4, 100, 1, 50);
  q.night_conns = 1;
  CHECK(alg.long_duties(q) == 1);
  CHECK(alg.cost(q) == doctest::Approx(4.0 * (1 - 0.25 * 2)));
}

TEST_CASE("pairing algebra laws on random triples") {
  std::mt19937_64 rng(17);
  std::vector<std::string> errors;
  for (int k = 0; k < 5; ++k) {
    const auto alg = harness::random_pairing_algebra(rng);
    harness::check_laws(alg, [&] { return harness::random_pairing(rng, alg); }, 1000, errors, "pairing");
  }
  harness::Additive3 add = harness::random_additive_algebra(rng);
  harness::check_laws(add, [&] { return harness::random_additive(rng); }, 1000, errors, "additive");
  CHECK_MESSAGE(errors.empty(), join_errors(errors));
}

TEST_CASE("network arc resources") {
  // CDG base, NCE outstation. Day 0: CDG-NCE 08:00-09:30, NCE-CDG 10:30-12:00.
  // Day 0 evening NCE arrival, day 1 early departure: reduced rest.
  auto inst = hand_instance({airport("CDG", true), airport("NCE", false)},
                            {{0, 1, at(0, 8), at(0, 9, 30)},
                             {1, 0, at(0, 10, 30), at(0, 12)},
                             {0, 1, at(0, 19), at(0, 20)},
                             {1, 0, at(1, 5), at(1, 6)}});
  inst.rules.weights.w_fly = 0.0;
  const auto conns = build_connections(inst);
  PricingDuals duals;
  duals.cover = {0.0, 12.0, 0.0, 0.0};
  duals.connection_penalty.assign(conns.size(), 0.0);
  auto net = build_pricing_network(inst, conns, 0, &duals);
  bool saw_day = false, saw_night = false, saw_start = false;
  for (int a = 0; a < net.graph.num_arcs(); ++a) {
    const auto& info = net.arc_info[a];
    const auto& q = net.graph.arc(a).resource;
    if (info.kind == PricingArcKind::Day && info.leg == 1) {
      saw_day = true;
      CHECK(q.core == Core::OneDay);
      CHECK(q.first_legs == 1);
      CHECK(q.first_flying == 90);
      CHECK(q.z == doctest::Approx(-12.0));
    }
    if (info.kind == PricingArcKind::Night && info.leg == 3 && conns[info.connection].from_leg == 2) {
      saw_night = true;
      CHECK(q.core == Core::MultiDay);
      CHECK(q.last_reduced);
      CHECK(q.last_legs == 2);
      // 05:00 departure: limit 480 below the 600 maximum.
      CHECK(q.last_flying == 60 + 600 - 480);
      CHECK(q.nights == 1);
      CHECK(q.z == doctest::Approx(inst.rules.weights.w_hotel));
    }
    if (info.kind == PricingArcKind::Start && info.leg == 0) {
      saw_start = true;
      CHECK(q.first_flying == 90);  // 08:00 lies in the 600-minute bucket
      CHECK(q.z == doctest::Approx(inst.rules.weights.w_pairing));
    }
    if (info.kind == PricingArcKind::End) CHECK(q == PairingResource{});
  }
  CHECK(saw_day);
  CHECK(saw_night);
  CHECK(saw_start);
}

TEST_CASE("windows without base departures yield no pricing paths") {
  auto inst = hand_instance({airport("CDG", true), airport("NCE", false)},
                            {{0, 1, at(0, 8), at(0, 9)}, {1, 0, at(0, 10), at(0, 11)}});
  const auto conns = build_connections(inst);
  // Window starting Friday covers Fri..Mon; Monday legs are inside through the wrap.
  auto wrap = build_pricing_network(inst, conns, 4);
  CHECK(wrap.legs.size() == 2);
  auto empty = build_pricing_network(inst, conns, 1);
  CHECK(empty.legs.empty());
  PairingAlgebra alg(inst.rules);
  CHECK(rcsp::brute_force_oracle(empty.graph, alg).feasible.empty());
}

TEST_CASE("master rows and coefficients") {
  auto inst = load_instance("data/toy2.json");
  const auto conns = build_connections(inst);
  const auto idx = index_connections(conns);
  auto p = make_pairing(inst, conns, idx, {0, 1});
  auto m = build_master({p}, inst);
  CHECK(m.lp.num_rows() == 4);
  CHECK(m.lp.num_vars() == 3);
  CHECK(m.num_pool == 1);

  Pairing longp;
  longp.legs = {0};
  longp.duties = {{0}, {}, {}};
  longp.nights = 3;
  longp.is_long = true;
  longp.long_duties = 1;
  inst.rules.alpha = 1.0;
  inst.rules.beta = 0.5;
  auto m2 = build_master({longp}, inst);
  double alpha_coef = 0.0, beta_coef = 0.0;
  for (auto [j, v] : m2.lp.row(m2.alpha_row).coeffs)
    if (j == 0) alpha_coef = v;
  for (auto [j, v] : m2.lp.row(m2.beta_row).coeffs)
    if (j == 0) beta_coef = v;
  CHECK(alpha_coef == 0.0);
  CHECK(beta_coef == doctest::Approx(-0.5));  // one long and two short duties
}

TEST_CASE("make_pairing rejects non-connections and builds duties") {
  auto inst = hand_instance({airport("CDG", true), airport("NCE", false)},
                            {{0, 1, at(0, 8), at(0, 9)},
                             {1, 0, at(0, 10), at(0, 11)},
                             {0, 1, at(1, 8), at(1, 9)},
                             {1, 0, at(2, 10), at(2, 11)}});
  const auto conns = build_connections(inst);
  const auto idx = index_connections(conns);
  CHECK_THROWS_AS(make_pairing(inst, conns, idx, {0, 2}), std::invalid_argument);
  auto p = make_pairing(inst, conns, idx, {2, 3});
  CHECK(p.num_duties() == 2);
  CHECK(p.nights == 1);
  CHECK(p.cost == doctest::Approx(300 + 120 + 100));
  CHECK(is_legal_pairing(inst, conns, p));
  auto q = make_pairing(inst, conns, idx, {0, 1});
  CHECK(q.num_duties() == 1);
  CHECK_FALSE(is_legal_pairing(inst, conns, make_pairing(inst, conns, idx, {1, 2})));
}

TEST_CASE("network paths are exactly the legal pairings") {
  std::mt19937_64 rng(41);
  std::vector<std::string> errors;
  for (int t = 0; t < 40; ++t) {
    harness::CrewInstanceParams p;
    p.legs = 4 + t % 7;
    p.airports = 3 + t % 2;
    p.bases = 1 + t % 2;
    auto inst = harness::random_crew_instance(rng, p);
    harness::check_network_bijection(inst, errors, "instance #" + std::to_string(t));
  }
  CHECK_MESSAGE(errors.empty(), join_errors(errors));
}

TEST_CASE("pricing agrees with the pairing oracle under random duals") {
  std::mt19937_64 rng(8);
  std::vector<std::string> errors;
  for (int t = 0; t < 25; ++t) {
    harness::CrewInstanceParams p;
    p.legs = 5 + t % 6;
    p.bases = 1 + t % 2;
    auto inst = harness::random_crew_instance(rng, p);
    harness::check_pricing(inst, rng, 1 + t % 3, errors, "instance #" + std::to_string(t));
  }
  CHECK_MESSAGE(errors.empty(), join_errors(errors));
}

TEST_CASE("zero duals price no negative column") {
  auto inst = load_instance("data/toy2.json");
  const auto conns = build_connections(inst);
  PricingEngine engine(inst, conns, {});
  PricingDuals zero;
  zero.cover.assign(inst.legs.size(), 0.0);
  zero.connection_penalty.assign(conns.size(), 0.0);
  auto cols = engine.best(zero);
  REQUIRE_FALSE(cols.empty());
  for (const auto& c : cols) CHECK(c.reduced_cost > 0);
}

TEST_CASE("out-and-back instance is solved provably optimally") {
  auto inst = load_instance("data/toy2.json");
  auto res = solve_crew_pairing(inst, build_connections(inst));
  CHECK(res.status == CrewPairingStatus::Optimal);
  CHECK(res.provably_optimal);
  REQUIRE(res.pairings.size() == 1);
  CHECK(res.pairings[0].legs == std::vector<int>{0, 1});
  CHECK(res.objective == doctest::Approx(300 + 180));
}

TEST_CASE("a leg that cannot return to base is reported uncovered") {
  auto inst = hand_instance({airport("CDG", true), airport("NCE", false), airport("LYS", false)},
                            {{0, 1, at(0, 8), at(0, 9)}, {1, 0, at(0, 10), at(0, 11)}, {0, 2, at(0, 15), at(0, 16)}});
  auto res = solve_crew_pairing(inst, build_connections(inst));
  CHECK(res.status == CrewPairingStatus::Infeasible);
  CHECK(res.uncovered_legs == std::vector<int>{2});
  CHECK(res.pairings.empty());
}

TEST_CASE("column generation matches the set-partitioning oracle") {
  std::mt19937_64 rng(123);
  std::vector<std::string> errors;
  int feasible = 0;
  for (int t = 0; t < 20; ++t) {
    harness::CrewInstanceParams p;
    p.legs = 6 + t % 5;
    p.bases = 1 + t % 2;
    p.alpha = t % 3 == 0 ? 0.0 : 0.5;
    p.beta = t % 4 == 0 ? 0.2 : 0.5;
    auto inst = harness::random_crew_instance(rng, p);
    CrewPairingOptions opts;
    opts.pricing.jobs = 1 + t % 3;
    auto cmp = harness::check_crew_pairing(inst, errors, "instance #" + std::to_string(t), opts);
    feasible += cmp.oracle_feasible;
  }
  CHECK_MESSAGE(errors.empty(), join_errors(errors));
  CHECK(feasible >= 10);
}

TEST_CASE("parallel pricing gives the same result as serial pricing") {
  std::mt19937_64 rng(77);
  harness::CrewInstanceParams p;
  p.legs = 12;
  auto inst = harness::random_crew_instance(rng, p);
  const auto conns = build_connections(inst);
  CrewPairingOptions serial, parallel;
  parallel.pricing.jobs = 4;
  auto a = solve_crew_pairing(inst, conns, serial);
  auto b = solve_crew_pairing(inst, conns, parallel);
  CHECK(a.objective == b.objective);
  CHECK(a.stats.cg_iterations == b.stats.cg_iterations);
  REQUIRE(a.pool.size() == b.pool.size());
  for (std::size_t i = 0; i < a.pool.size(); ++i) CHECK(a.pool[i].legs == b.pool[i].legs);
}

TEST_CASE("cut helpers") {
  CHECK(cut_rhs(4, 1.0) == 3.0);
  CHECK(cut_rhs(4, 0.5) == 2.0);
  Cut c{{2, 5, 9}, 2.0};
  Pairing p;
  p.short_connections = {1, 2, 9};
  CHECK(cut_coefficient(c, p) == 2);
}
