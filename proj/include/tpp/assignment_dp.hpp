#pragma once

#include <cstdint>
#include <vector>

#include "tpp/blocking.hpp"
#include "tpp/tree.hpp"

namespace tpp {

/// Atomic-unit masses rounded down onto the delta = eps^3/2 lattice.
struct DiscretizedInstance {
  double delta = 0.0;
  std::vector<std::int64_t> weights;  // w_u = floor(q_u / delta)
  std::int64_t total_weight = 0;      // W = sum of weights
  std::vector<double> exact_masses;   // q_u, kept for the rounding-gap check
};

struct DpOptions {
  // Abort with a resource error once a per-step frontier exceeds this.
  std::uint64_t state_cap = 50'000'000;
};

struct DpResult {
  AtomicAssignment assignment;
  double rounded_objective = 0.0;     // D-hat of the returned terminal state
  std::vector<std::int64_t> terminal; // rounded loads of leaves 1..L-1
  std::uint64_t max_frontier = 0;     // diagnostics for benchmarking
  std::vector<std::uint64_t> frontier_sizes;  // per placed unit
};

/// Frontier trace as "step,frontier_size" CSV rows, for debugging.
std::string frontier_csv(const DpResult& result);

DiscretizedInstance discretize(const std::vector<AtomicUnit>& units,
                               double epsilon);

/// Rounded objective of a terminal state: the first L-1 loads are explicit
/// and leaf L carries the remaining W - sum(loads) lattice units.
double rounded_objective(const HeightVector& heights, double delta,
                         std::int64_t total_weight,
                         const std::vector<std::int64_t>& loads);

/// Reachability DP over rounded leaf loads. Returns an assignment realizing
/// a terminal state of minimum rounded objective; ties prefer the
/// lexicographically greatest terminal state (which reproduces the natural
/// unit-per-leaf optimum on aligned instances), and reconstruction prefers
/// the smallest leaf index at each step. Empty leaves are permitted here.
DpResult run_dp(const DiscretizedInstance& disc, const HeightVector& heights,
                const DpOptions& options = {});

}  // namespace tpp
