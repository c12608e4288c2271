#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "skewlabs/oracle.hpp"
#include "skewlabs/solvers.hpp"
#include "support/test_oracles.hpp"

using namespace skewlabs;

namespace {
SkewSymmetricSequence n5_example() {
  const std::int8_t half[] = {1, 1, 1};
  return SkewSymmetricSequence::from_half(half);  // [1,1,1,-1,1]
}
}  // namespace

TEST_CASE("hash_candidate reproduces the frozen wrap-around trace") {
  const auto psi = n5_example();
  const SawConfig cfg;  // P=315223, Q=99041

  // flip_at=0 over [1,1,1]: h = ((P*Q - 1)*Q + 1)*Q + 1, all mod 2^64.
  std::uint64_t h = cfg.hash_p;
  h = h * cfg.hash_q - 1;
  CHECK(h == 31'220'001'142ull);  // first step, exact integer value
  h = h * cfg.hash_q + 1;
  h = h * cfg.hash_q + 1;
  CHECK(hash_candidate(psi, 0, cfg) == h);
  CHECK(hash_candidate(psi, 0, cfg) == 11092822463481948888ull);

  CHECK(hash_candidate(psi, std::nullopt, cfg) ==
        hash_candidate(psi, std::nullopt, cfg));
}

TEST_CASE("neighbor fingerprint equals flip-then-fingerprint") {
  std::mt19937_64 rng(771);
  const SawConfig cfg;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = testsupport::random_odd_n(rng, 5, 101);
    const int l = (n - 1) / 2;
    auto psi = testsupport::random_skew(rng, l);
    const int q = static_cast<int>(rng() % static_cast<std::uint64_t>(l));
    const std::uint64_t probe = hash_candidate(psi, q, cfg);
    psi.flip_pair(q);
    CHECK(probe == hash_candidate(psi, std::nullopt, cfg));
  }
}

TEST_CASE("pick_best_neighbor follows the scan/tabu rules") {
  const auto psi = n5_example();
  const auto side = sidelobes_naive(psi);
  const SawConfig cfg;
  VisitedSet visited;

  // deltas: q=0 -> +8, q=1 -> 0; best unvisited is q=1
  REQUIRE(derivative(psi, side, 0) == 8);
  REQUIRE(derivative(psi, side, 1) == 0);
  CHECK(pick_best_neighbor(psi, side, visited, cfg) == 1);

  SECTION("uphill move accepted when the downhill neighbor is visited") {
    visited.insert(hash_candidate(psi, 1, cfg));
    CHECK(pick_best_neighbor(psi, side, visited, cfg) == 0);
  }
  SECTION("exhausted neighborhood yields none") {
    visited.insert(hash_candidate(psi, 0, cfg));
    visited.insert(hash_candidate(psi, 1, cfg));
    CHECK_FALSE(pick_best_neighbor(psi, side, visited, cfg).has_value());
  }
}

TEST_CASE("pick_best_neighbor breaks delta ties toward the last index") {
  // n=9 start state whose first two flips tie at delta=0 would be
  // fragile to construct by hand; instead verify the rule on random
  // states: whenever two q share the minimal delta, the larger q wins.
  std::mt19937_64 rng(18);
  const SawConfig cfg;
  VisitedSet visited;
  int ties_seen = 0;
  for (int rep = 0; rep < 400 && ties_seen < 25; ++rep) {
    const int n = testsupport::random_odd_n(rng, 9, 41);
    const int l = (n - 1) / 2;
    const auto psi = testsupport::random_skew(rng, l);
    const auto side = sidelobes_naive(psi);
    std::int64_t best_delta = std::numeric_limits<std::int64_t>::max();
    int last_best = -1;
    int count_best = 0;
    for (int q = 0; q < l; ++q) {
      const auto d = derivative(psi, side, q);
      if (d < best_delta) {
        best_delta = d;
        last_best = q;
        count_best = 1;
      } else if (d == best_delta) {
        last_best = q;
        ++count_best;
      }
    }
    if (count_best > 1) ++ties_seen;
    CHECK(pick_best_neighbor(psi, side, visited, cfg) == last_best);
  }
  CHECK(ties_seen > 0);
}

TEST_CASE("quake keeps the sidelobes consistent") {
  std::mt19937_64 rng(4);
  auto psi = testsupport::random_skew(rng, 2);  // n=5
  auto side = sidelobes_naive(psi);
  const std::int64_t e0 = side.energy();
  const std::int64_t d = quake(1, psi, side, rng);
  CHECK(side == sidelobes_naive(psi));
  CHECK(side.energy() == e0 + d);
  CHECK(is_skew_symmetric(psi.elements()));
  CHECK_THROWS_AS(quake(0, psi, side, rng), std::invalid_argument);
}

TEST_CASE("quake hitting the same position twice is a no-op") {
  struct FixedRng {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ull; }
    result_type operator()() const { return 0; }  // always position 0
  } fixed;
  std::mt19937_64 rng(4);
  auto psi = testsupport::random_skew(rng, 5);
  auto side = sidelobes_naive(psi);
  const auto psi0 = psi;
  const auto side0 = side;
  const std::int64_t d = quake(2, psi, side, fixed);
  CHECK(d == 0);
  CHECK(psi == psi0);
  CHECK(side == side0);
}

TEST_CASE("saw_search finds the forced optimum at n=3") {
  SawConfig cfg;
  cfg.seed = 5;
  cfg.inner_threshold = 10;
  cfg.outer_threshold = 2;
  const auto rec = saw_search(3, cfg);
  CHECK(rec.best_energy == 1);
  CHECK(rec.best_mf == 4.5);
}

TEST_CASE("saw_search reaches the exhaustive optimum on small lengths") {
  // frozen from exhaustive enumeration: n=5 optimum E=2 (MF 6.25),
  // n=13 optimum E=6 (MF 169/12)
  SawConfig cfg5;
  cfg5.seed = 1;
  cfg5.inner_threshold = 100;
  cfg5.outer_threshold = 2;
  const auto rec5 = saw_search(5, cfg5);
  CHECK(rec5.best_energy == 2);
  CHECK(rec5.best_mf == 6.25);

  SawConfig cfg13;
  cfg13.seed = 1;
  cfg13.inner_threshold = 1000;
  cfg13.outer_threshold = 50;
  const auto rec13 = saw_search(13, cfg13);
  CHECK(rec13.best_energy == 6);
  CHECK(rec13.best_mf == Catch::Approx(169.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("saw_search respects target_mf early stop") {
  SawConfig cfg;
  cfg.seed = 2;
  cfg.inner_threshold = 1'000'000;  // would run much longer without target
  cfg.outer_threshold = 1'000'000;
  cfg.target_mf = 4.0;
  const auto rec = saw_search(41, cfg);
  CHECK(rec.best_mf >= 4.0);
}

TEST_CASE("saw fingerprint traces are duplicate-free within a walk") {
  std::map<std::uint64_t, std::vector<std::uint64_t>> walk_traces;
  SearchHooks hooks;
  hooks.on_visit = [&](std::uint64_t walk, std::uint64_t fp) {
    walk_traces[walk].push_back(fp);
  };
  SawConfig cfg;
  cfg.seed = 77;
  cfg.inner_threshold = 40;
  cfg.outer_threshold = 6;
  (void)saw_search(21, cfg, hooks);
  REQUIRE(walk_traces.size() == 6);
  for (const auto& [walk, fps] : walk_traces) {
    const std::set<std::uint64_t> unique(fps.begin(), fps.end());
    CHECK(unique.size() == fps.size());
    CHECK(fps.size() <= cfg.inner_threshold + 1);  // set size bound
  }
}

TEST_CASE("saw_search re-scored best matches the naive path") {
  SawConfig cfg;
  cfg.seed = 3;
  cfg.inner_threshold = 200;
  cfg.outer_threshold = 3;
  const auto rec = saw_search(41, cfg);
  CHECK(sidelobes_naive(rec.best_sequence).energy() == rec.best_energy);
  CHECK(is_skew_symmetric(rec.best_sequence.elements()));
}

TEST_CASE("shc_search at n=3 records the optimum at step 0") {
  ShcConfig cfg;
  cfg.seed = 9;
  cfg.step_threshold = 1;
  std::vector<std::uint64_t> steps;
  SearchHooks hooks;
  hooks.on_improvement = [&](const ImprovementEvent& ev) {
    steps.push_back(ev.step);
  };
  const auto rec = shc_search(3, cfg, hooks);
  CHECK(rec.best_mf == 4.5);
  REQUIRE_FALSE(steps.empty());
  CHECK(steps.front() == 0);
}

TEST_CASE("shc_search reaches the n=5 optimum") {
  ShcConfig cfg;
  cfg.seed = 1;
  cfg.step_threshold = 50;
  const auto rec = shc_search(5, cfg);
  CHECK(rec.best_energy == 2);
  CHECK(rec.best_mf == 6.25);
}

TEST_CASE("shc best-energy trace is strictly decreasing") {
  ShcConfig cfg;
  cfg.seed = 123;
  cfg.step_threshold = 3000;
  std::vector<std::int64_t> energies;
  SearchHooks hooks;
  hooks.on_improvement = [&](const ImprovementEvent& ev) {
    energies.push_back(ev.energy);
  };
  const auto rec = shc_search(101, cfg, hooks);
  REQUIRE(energies.size() > 1);
  for (std::size_t i = 1; i < energies.size(); ++i)
    CHECK(energies[i] < energies[i - 1]);
  CHECK(rec.best_energy == energies.back());
  CHECK(sidelobes_naive(rec.best_sequence).energy() == rec.best_energy);
}

TEST_CASE("shc record-only variant stays consistent") {
  ShcConfig cfg;
  cfg.seed = 5;
  cfg.step_threshold = 500;
  cfg.record_only_acceptance = true;
  std::vector<std::int64_t> energies;
  SearchHooks hooks;
  hooks.on_improvement = [&](const ImprovementEvent& ev) {
    energies.push_back(ev.energy);
  };
  const auto rec = shc_search(51, cfg, hooks);
  CHECK(rec.best_energy == sidelobes_naive(rec.best_sequence).energy());
  for (std::size_t i = 1; i < energies.size(); ++i)
    CHECK(energies[i] < energies[i - 1]);  // every accept beats the record
  CHECK(rec.best_mf > 0.0);
}

TEST_CASE("shc default mode converges far faster than record-only") {
  // same seed and round budget; the first-improvement rule must reach a
  // strictly better energy than the record-only rule on a mid-size run
  ShcConfig fast;
  fast.seed = 21;
  fast.step_threshold = 4000;
  ShcConfig frozen = fast;
  frozen.record_only_acceptance = true;
  const auto a = shc_search(201, fast);
  const auto b = shc_search(201, frozen);
  CHECK(a.best_energy < b.best_energy);
}

TEST_CASE("solvers are deterministic given the seed") {
  SawConfig scfg;
  scfg.seed = 2718;
  scfg.inner_threshold = 60;
  scfg.outer_threshold = 4;
  const auto s1 = saw_search(31, scfg);
  const auto s2 = saw_search(31, scfg);
  CHECK(same_outcome(s1, s2));

  ShcConfig hcfg;
  hcfg.seed = 3141;
  hcfg.step_threshold = 400;
  const auto h1 = shc_search(31, hcfg);
  const auto h2 = shc_search(31, hcfg);
  CHECK(same_outcome(h1, h2));
}

TEST_CASE("config validation") {
  SawConfig bad;
  bad.hash_p = 315'222;  // even
  CHECK_THROWS_AS(saw_search(5, bad), std::invalid_argument);
  bad = SawConfig{};
  bad.inner_threshold = 0;
  CHECK_THROWS_AS(saw_search(5, bad), std::invalid_argument);
  CHECK_THROWS_AS(saw_search(4, SawConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(saw_search(1, SawConfig{}), std::invalid_argument);

  ShcConfig hbad;
  hbad.quake_size = 0;
  CHECK_THROWS_AS(shc_search(5, hbad), std::invalid_argument);
  hbad = ShcConfig{};
  hbad.step_threshold = 0;
  CHECK_THROWS_AS(shc_search(5, hbad), std::invalid_argument);
  CHECK_THROWS_AS(shc_search(6, ShcConfig{}), std::invalid_argument);
}

TEST_CASE("quake_schedule clamps and matches the published points") {
  CHECK(quake_schedule(999) == 1);
  CHECK(quake_schedule(10001) == 15);         // fit
  CHECK(quake_table_lookup(10001) == 14);     // measured value differs
  CHECK(quake_schedule(3) == 1);              // clamped
  CHECK(quake_schedule(100001) == 157);
  CHECK(quake_table_lookup(100001) == 160);
  CHECK_FALSE(quake_table_lookup(1000).has_value());
  CHECK_THROWS_AS(quake_schedule(4), std::invalid_argument);
}

TEST_CASE("time_estimate evaluates and clamps the quadratic fit") {
  CHECK(time_estimate(100001) == Catch::Approx(17957.56).margin(1.0));
  CHECK(time_estimate_raw(10001) == Catch::Approx(-150.8).margin(0.5));
  CHECK(time_estimate(10001) == 0.0);
  CHECK(time_estimate(0) == Catch::Approx(177.2867).margin(1e-9));
}

TEST_CASE("solver working set stays linear in n") {
  // size model: elements (1 byte) + sidelobes (4 bytes) + fingerprints
  // (8 bytes per entry, bounded by inner_threshold + 1); nothing n^2.
  const int n = 20001;
  const std::uint64_t inner = 10'000;
  const std::uint64_t model_bytes =
      static_cast<std::uint64_t>(n)            // sequence
      + 4u * static_cast<std::uint64_t>(n - 1) // sidelobe array
      + 8u * (inner + 1);                      // visited fingerprints
  CHECK(model_bytes < 10u * 1024 * 1024);
  const auto tau = memory_estimate(n).tau_bytes;  // what was replaced
  CHECK(tau > 1'000'000'000ull);                  // would not fit the budget
}
