#include <random>

#include "doctest.h"
#include "support/test_util.hpp"
#include "tpp/blocking.hpp"
#include "tpp/json_io.hpp"
#include "tpp/solver.hpp"

using tpp::brute_force;
using tpp::check_assumptions;
using tpp::HeightVector;
using tpp::load_distribution;
using tpp::make_instance;
using tpp::OracleResult;
using tpp::oracle_opt_for_height;
using tpp::ProblemInstance;
using tpp::Solution;
using tpp::solve;
using tpp::SolveOptions;
using tpp::TokenDistribution;
using tpp::verify;

namespace {

const std::vector<double> kRunningExample{0.30, 0.20, 0.15, 0.12,
                                          0.10, 0.06, 0.05, 0.02};

// n = 8 uniform tokens: every token is small at theta = 0.125, so the
// R = 1, eps = 0.5 assumptions all hold.
ProblemInstance uniform_instance() {
  return make_instance(
      load_distribution(std::vector<double>(8, 0.125), false), 1.0, 0.5);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("an exactly dyadic pair solves to zero divergence (best effort)") {
  const ProblemInstance inst =
      make_instance(load_distribution({0.5, 0.5}, false), 1.0, 0.5);
  // No small tokens exist, so Assumption 2 fails and the guaranteed mode
  // must refuse; the best-effort mode finds the exact tree.
  CHECK_THROWS_AS(solve(inst), tpp::Error);

  SolveOptions options;
  options.require_assumptions = false;
  const Solution sol = solve(inst, options);
  CHECK(sol.heights.depths() == std::vector<int>{1, 1});
  CHECK(sol.divergence == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.rate == 1.0);
  CHECK(sol.branch == "direct");
  CHECK(verify(sol, inst).all_pass());
}

TEST_CASE("assumption failures are hard errors naming the assumption") {
  SUBCASE("support too small for the rate") {
    const ProblemInstance inst =
        make_instance(load_distribution({0.5, 0.3, 0.2}, false), 2.0, 0.5);
    try {
      solve(inst);
      FAIL("expected an assumption failure");
    } catch (const tpp::Error& e) {
      CHECK(e.kind() == tpp::ErrorKind::assumption_failure);
      CHECK(std::string(e.what()).find("Assumption 1") != std::string::npos);
    }
  }
  SUBCASE("running example at R=2.25 lacks small items") {
    const ProblemInstance inst = make_instance(
        load_distribution(kRunningExample, false), 2.25, 0.25);
    try {
      solve(inst);
      FAIL("expected an assumption failure");
    } catch (const tpp::Error& e) {
      CHECK(e.kind() == tpp::ErrorKind::assumption_failure);
      CHECK(std::string(e.what()).find("Assumption 2") != std::string::npos);
    }
  }
}

TEST_CASE("solve on a valid instance produces a verified feasible solution") {
  const ProblemInstance inst = uniform_instance();
  REQUIRE(check_assumptions(inst).all_pass());
  const Solution sol = solve(inst);
  CHECK(sol.rate >= 1.0);
  CHECK(sol.partition.surjective());
  CHECK(sol.candidate_count == 2);  // (0) and (1,1)
  CHECK(verify(sol, inst).all_pass());

  // Guarantee sanity: within 12 eps of the restricted-space optimum.
  const OracleResult oracle = brute_force(inst.dist, 1.0, 3);
  CHECK(sol.divergence <= oracle.opt_divergence + 12.0 * 0.5 + 1e-9);
}

TEST_CASE("the no-candidate path reports per-candidate reasons") {
  // Two tokens, R = 1.9: depth-1 trees miss the rate floor and the repair
  // reserve cannot exist, so every candidate is discarded.
  const ProblemInstance inst =
      make_instance(load_distribution({0.5, 0.5}, false), 1.9, 0.5);
  SolveOptions options;
  options.require_assumptions = false;
  try {
    solve(inst, options);
    FAIL("expected a no-candidate error");
  } catch (const tpp::Error& e) {
    CHECK(e.kind() == tpp::ErrorKind::no_candidate);
    CHECK(std::string(e.what()).find("discarded") != std::string::npos);
  }
}

TEST_CASE("oracle matches hand-computed optima") {
  SUBCASE("exact dyadic pair") {
    const OracleResult r =
        brute_force(load_distribution({0.5, 0.5}, false), 1.0, 4);
    CHECK(r.opt_divergence == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.opt_heights.depths() == std::vector<int>{1, 1});
  }
  SUBCASE("0.7/0.3 must settle for divergence 0.4") {
    const OracleResult r =
        brute_force(load_distribution({0.7, 0.3}, false), 1.0, 4);
    CHECK(r.opt_divergence == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.opt_heights.depths() == std::vector<int>{1, 1});
    CHECK(r.search_space_size > 0);
  }
  SUBCASE("running example masses on the fixed tree reach 0.17") {
    const TokenDistribution five =
        load_distribution({0.30, 0.22, 0.20, 0.12, 0.16}, true);
    CHECK(oracle_opt_for_height(five, HeightVector({2, 2, 2, 3, 3})) ==
          doctest::Approx(0.17).epsilon(1e-12));
  }
  SUBCASE("guards") {
    std::mt19937_64 rng(5);
    CHECK_THROWS_AS(brute_force(tpp_test::random_distribution(rng, 11), 1.0, 4),
                    tpp::Error);
    CHECK_THROWS_AS(brute_force(tpp_test::random_distribution(rng, 4), 1.0, 5),
                    tpp::Error);
  }
}

TEST_CASE("oracle optimum is itself a consistent solution") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const TokenDistribution dist = tpp_test::random_distribution(rng, 6);
    const OracleResult r = brute_force(dist, 1.0, 3);
    CHECK(r.opt_partition.surjective());
    CHECK(tpp::divergence(r.opt_partition.masses, r.opt_heights) ==
          doctest::Approx(r.opt_divergence).epsilon(1e-12));
    CHECK(tpp::rate(r.opt_heights) >= 1.0 - 1e-12);
    // No surjective assignment may beat the reported optimum on any
    // feasible tree: spot-check with a few random assignments.
    for (const auto& candidate : tpp::enumerate_height_vectors(3)) {
      if (candidate.heights.leaf_count() > dist.size()) continue;
      if (tpp::rate(candidate.heights) < 1.0) continue;
      const tpp::Partition random_part = tpp_test::random_surjective_partition(
          rng, dist, candidate.heights.leaf_count());
      CHECK(tpp::divergence(random_part.masses, candidate.heights) >=
            r.opt_divergence - 1e-12);
    }
  }
}

TEST_CASE("verify flags corrupted solutions") {
  const ProblemInstance inst = uniform_instance();
  const Solution sol = solve(inst);

  SUBCASE("duplicated token breaks disjointness") {
    Solution bad = sol;
    bad.partition.sets[0].push_back(bad.partition.sets[1][0]);
    const auto report = verify(bad, inst);
    CHECK_FALSE(report.all_pass());
    bool disjoint_failed = false;
    for (const auto& c : report.checks) {
      if (c.name == "disjoint") disjoint_failed = !c.pass;
    }
    CHECK(disjoint_failed);
  }
  SUBCASE("understated rate fails the rate check") {
    Solution bad = sol;
    bad.rate -= 0.01;
    const auto report = verify(bad, inst);
    CHECK_FALSE(report.all_pass());
  }
  SUBCASE("tampered divergence fails recomputation") {
    Solution bad = sol;
    bad.divergence += 1e-6;
    CHECK_FALSE(verify(bad, inst).all_pass());
  }
}

TEST_CASE("solve is deterministic, including across worker counts") {
  const ProblemInstance inst = uniform_instance();
  const std::string first =
      tpp::solution_to_json(solve(inst), inst.dist).dump(2);
  const std::string second =
      tpp::solution_to_json(solve(inst), inst.dist).dump(2);
  CHECK(first == second);

  SolveOptions parallel;
  parallel.jobs = 4;
  const std::string threaded =
      tpp::solution_to_json(solve(inst, parallel), inst.dist).dump(2);
  CHECK(threaded == first);
}

TEST_CASE("solution JSON round-trips through the documented schema") {
  const ProblemInstance inst = uniform_instance();
  const Solution sol = solve(inst);
  const nlohmann::json j = tpp::solution_to_json(sol, inst.dist);
  for (const char* key :
       {"branch", "divergence", "heights", "partition", "rate"}) {
    CHECK(j.contains(key));
  }
  const Solution parsed = tpp::solution_from_json(j, inst.dist);
  CHECK(parsed.heights == sol.heights);
  CHECK(parsed.divergence == sol.divergence);
  CHECK(parsed.rate == sol.rate);
  CHECK(parsed.branch == sol.branch);
  CHECK(parsed.partition.sets == sol.partition.sets);
  CHECK(verify(parsed, inst).all_pass());

  const auto units = tpp::build_atomic_units(inst.dist, inst.epsilon);
  const nlohmann::json dump = tpp::units_to_json(units);
  CHECK(dump.is_array());
  CHECK(dump.size() == units.size());
  CHECK(dump[0].contains("kind"));
}

TEST_CASE("halving epsilon grows the DP frontier") {
  // Long-tailed distribution with plenty of small tokens for both regimes.
  std::vector<double> raw;
  for (int i = 1; i <= 50; ++i) raw.push_back(1.0 / (i * i));
  const TokenDistribution dist = load_distribution(raw, true);
  const Solution coarse = solve(make_instance(dist, 0.5, 0.5));
  const Solution fine = solve(make_instance(dist, 0.5, 0.25));
  CHECK(fine.max_frontier > coarse.max_frontier);
}

TEST_CASE("desk-scale gap check against the oracle") {
  std::mt19937_64 rng(83);
  int accepted = 0;
  while (accepted < 20) {
    const TokenDistribution dist = tpp_test::random_distribution(rng, 8);
    const ProblemInstance inst = make_instance(dist, 1.0, 0.5);
    if (!check_assumptions(inst).all_pass()) continue;
    const Solution sol = solve(inst);
    const OracleResult oracle = brute_force(dist, 1.0, 3);
    CHECK(sol.divergence <= oracle.opt_divergence + 12.0 * 0.5 + 1e-9);
    CHECK(verify(sol, inst).all_pass());
    ++accepted;
  }
}

}  // TEST_SUITE
