#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpp/assignment_dp.hpp"
#include "tpp/distribution.hpp"
#include "tpp/transform.hpp"
#include "tpp/tree.hpp"

namespace tpp {

struct SolveOptions {
  // When false, assumption failures downgrade to notes and the solver runs
  // best-effort without the additive guarantee.
  bool require_assumptions = true;
  int jobs = 1;
  std::uint64_t state_cap = 50'000'000;
};

/// Feasible output of the solver: a surjective partition and a Kraft-exact
/// height vector meeting the rate floor, with provenance diagnostics.
struct Solution {
  Partition partition;
  HeightVector heights;
  double divergence = 0.0;
  double rate = 0.0;
  std::string branch;  // "direct" or "repaired"
  int candidate_count = 0;
  std::uint64_t max_frontier = 0;
  double elapsed_ms = 0.0;
  std::vector<std::string> notes;  // discard reasons, assumption warnings
};

/// Global minimum over an explicitly enumerated feasible space.
struct OracleResult {
  double opt_divergence = 0.0;
  Partition opt_partition;
  HeightVector opt_heights;
  std::int64_t search_space_size = 0;
};

struct VerificationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool all_pass() const;
};

/// Runs the full approximation scheme: enumerate bounded-depth height
/// vectors, block, run the assignment DP, unpack, seed, and either accept
/// directly (rate already above the floor) or repair through a depth-d leaf.
/// Returns the accepted candidate of minimum divergence.
Solution solve(const ProblemInstance& inst, const SolveOptions& options = {});

/// Exhaustive reference: every Kraft height vector up to max_depth with rate
/// above the floor, and for each every surjective token partition. Guarded
/// to n <= 10, max_depth <= 4.
OracleResult brute_force(const TokenDistribution& dist, double rate_floor,
                         int max_depth);

/// Minimum divergence over surjective assignments for one fixed tree.
double oracle_opt_for_height(const TokenDistribution& dist,
                             const HeightVector& heights);

/// Independent feasibility recheck of a solution against its instance.
VerificationReport verify(const Solution& sol, const ProblemInstance& inst);

}  // namespace tpp
