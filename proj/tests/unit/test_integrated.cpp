#include <doctest.h>

#include <random>

#include "support/integrated_checks.hpp"

using namespace aircrew;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string s;
  for (std::size_t i = 0; i < errors.size() && i < 6; ++i) s += errors[i] + "\n";
  return s;
}

}  // namespace

TEST_CASE("short connections of a solution") {
  CHECK(short_connections_of({}).empty());
  Pairing a, b;
  a.short_connections = {7, 3};
  b.short_connections = {3, 11};
  CHECK(short_connections_of({a}) == std::vector<int>{3, 7});
  CHECK(short_connections_of({a, b}) == std::vector<int>{3, 7, 11});
}

TEST_CASE("short connections match a scan of consecutive legs") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    harness::CrewInstanceParams p;
    p.legs = 8;
    auto inst = harness::random_crew_instance(rng, p);
    auto conns = build_connections(inst);
    auto res = solve_crew_pairing(inst, conns);
    std::set<int> scanned;
    for (const auto& pr : res.pairings)
      for (std::size_t i = 1; i < pr.legs.size(); ++i)
        for (int c = 0; c < static_cast<int>(conns.size()); ++c)
          if (conns[c].from_leg == pr.legs[i - 1] && conns[c].to_leg == pr.legs[i] && conns[c].is_short())
            scanned.insert(c);
    auto got = short_connections_of(res.pairings);
    CHECK(std::vector<int>(scanned.begin(), scanned.end()) == got);
  }
}

TEST_CASE("cut pool right-hand sides and duplicates") {
  CutPool exact(1.0);
  CHECK(exact.add({4, 1, 2, 3}));
  CHECK(exact.cuts()[0].rhs == 3.0);
  CHECK(exact.cuts()[0].connections == std::vector<int>{1, 2, 3, 4});
  CHECK_FALSE(exact.add({1, 2, 3, 4}));
  CHECK_THROWS_AS(exact.add({}), std::invalid_argument);

  CutPool strong(0.9);
  strong.add({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(strong.cuts()[0].rhs == doctest::Approx(9.0));
  CHECK_THROWS_AS(CutPool(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CutPool(1.5), std::invalid_argument);
}

TEST_CASE("an instance without short turns converges at once") {
  auto inst = load_instance("data/toy2.json");
  auto res = solve_integrated(inst, build_connections(inst));
  CHECK(res.status == IntegratedStatus::Converged);
  CHECK(res.iterations == 1);
  CHECK(res.cuts.empty());
  CHECK(res.gap == doctest::Approx(0.0));
  CHECK(res.routing.routes.size() == 1);
}

TEST_CASE("cut rows enter the master and pricing") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 40; ++t) {
    harness::CrewInstanceParams p;
    p.legs = 8;
    auto inst = harness::random_crew_instance(rng, p);
    auto conns = build_connections(inst);
    auto base = solve_crew_pairing(inst, conns);
    auto s = short_connections_of(base.pairings);
    if (s.empty()) continue;
    CrewPairingOptions opts;
    opts.cuts.push_back({s, cut_rhs(s.size(), 1.0)});
    auto cut = solve_crew_pairing(inst, conns, opts);
    if (cut.status != CrewPairingStatus::Optimal) continue;
    // The cut forbids using every connection of s at once.
    auto used = short_connections_of(cut.pairings);
    int hits = 0;
    for (int c : s) hits += std::binary_search(used.begin(), used.end(), c);
    CHECK(hits < static_cast<int>(s.size()));
    CHECK(cut.objective >= base.objective - 1e-6);
    CHECK(cut.stats.max_rc_error < 1e-7);
  }
}

TEST_CASE("gamma 1 loop matches joint brute force") {
  std::mt19937_64 rng(31);
  const auto instances = harness::sample_integrated_instances(rng, 15, 6);
  REQUIRE(instances.size() == 15);
  std::vector<std::string> errors;
  int with_cuts = 0, order_fail = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto cmp = harness::check_integrated(instances[i], errors, "instance #" + std::to_string(i));
    with_cuts += cmp.iterations > 1;
    order_fail += !cmp.order_holds;
  }
  CHECK_MESSAGE(errors.empty(), join_errors(errors));
  CHECK(with_cuts >= 6);
  MESSAGE("instances needing cuts: " << with_cuts << ", gamma order violations: " << order_fail);
}
