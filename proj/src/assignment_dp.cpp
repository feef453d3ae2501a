#include "tpp/assignment_dp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <unordered_map>

namespace tpp {

namespace {

using State = std::vector<std::int64_t>;

struct StateHash {
  std::size_t operator()(const State& v) const noexcept {
    std::size_t seed = v.size();
    for (auto x : v) {
      seed ^= std::hash<std::int64_t>()(x) + 0x9e3779b97f4a7c15ull +
              (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

// Per-step frontier: reachable state -> smallest leaf index that reaches it.
using Frontier = std::unordered_map<State, int, StateHash>;

}  // namespace

std::string frontier_csv(const DpResult& result) {
  std::string csv = "step,frontier_size\n";
  for (std::size_t t = 0; t < result.frontier_sizes.size(); ++t) {
    csv += std::to_string(t + 1) + "," +
           std::to_string(result.frontier_sizes[t]) + "\n";
  }
  return csv;
}

DiscretizedInstance discretize(const std::vector<AtomicUnit>& units,
                               double epsilon) {
  if (epsilon <= 0.0 || epsilon >= 1.0) {
    throw Error(ErrorKind::invalid_input, "epsilon must lie in (0,1)");
  }
  DiscretizedInstance disc;
  disc.delta = epsilon * epsilon * epsilon / 2.0;
  disc.weights.reserve(units.size());
  disc.exact_masses.reserve(units.size());
  for (const AtomicUnit& unit : units) {
    // The small nudge keeps lattice-aligned masses (q = k*delta) from
    // flooring to k-1 through floating-point division.
    auto w = static_cast<std::int64_t>(
        std::floor(unit.mass / disc.delta + 1e-9));
    disc.weights.push_back(w);
    disc.exact_masses.push_back(unit.mass);
    disc.total_weight += w;
  }
  return disc;
}

double rounded_objective(const HeightVector& heights, double delta,
                         std::int64_t total_weight,
                         const std::vector<std::int64_t>& loads) {
  const int leaves = heights.leaf_count();
  if (static_cast<int>(loads.size()) != leaves - 1) {
    throw Error(ErrorKind::invalid_input,
                "expected " + std::to_string(leaves - 1) +
                    " explicit loads, got " + std::to_string(loads.size()));
  }
  double total = 0.0;
  std::int64_t assigned = 0;
  for (int j = 0; j + 1 < leaves; ++j) {
    total += std::abs(heights.target(j) - delta * static_cast<double>(loads[j]));
    assigned += loads[j];
  }
  total += std::abs(heights.target(leaves - 1) -
                    delta * static_cast<double>(total_weight - assigned));
  return total;
}

DpResult run_dp(const DiscretizedInstance& disc, const HeightVector& heights,
                const DpOptions& options) {
  const int leaves = heights.leaf_count();
  const int unit_count = static_cast<int>(disc.weights.size());
  if (unit_count == 0) {
    throw Error(ErrorKind::invalid_input, "no atomic units to assign");
  }

  DpResult result;
  result.assignment.leaf_count = leaves;
  result.assignment.leaf_of.assign(unit_count, leaves - 1);

  if (leaves == 1) {
    result.assignment.leaf_of.assign(unit_count, 0);
    result.rounded_objective =
        rounded_objective(heights, disc.delta, disc.total_weight, {});
    result.max_frontier = 1;
    return result;
  }

  // Zero-weight units never move the state; they are appended to the last
  // leaf during reconstruction instead of widening the DP.
  std::vector<int> steps;
  steps.reserve(unit_count);
  for (int u = 0; u < unit_count; ++u) {
    if (disc.weights[u] > 0) steps.push_back(u);
  }

  std::vector<Frontier> layers(steps.size() + 1);
  layers[0].emplace(State(leaves - 1, 0), 0);
  result.max_frontier = 1;

  for (std::size_t t = 0; t < steps.size(); ++t) {
    const std::int64_t w = disc.weights[steps[t]];
    Frontier& next = layers[t + 1];
    next.reserve(layers[t].size() * leaves);
    for (const auto& [state, leaf] : layers[t]) {
      for (int j = 0; j < leaves - 1; ++j) {
        State moved = state;
        moved[j] += w;
        auto [it, inserted] = next.try_emplace(std::move(moved), j);
        if (!inserted && j < it->second) it->second = j;
      }
      // Placing on the final leaf leaves the tracked loads unchanged.
      auto [it, inserted] = next.try_emplace(state, leaves - 1);
      if (!inserted && leaves - 1 < it->second) it->second = leaves - 1;
    }
    result.max_frontier = std::max<std::uint64_t>(result.max_frontier,
                                                  next.size());
    result.frontier_sizes.push_back(next.size());
    if (next.size() > options.state_cap) {
      throw Error(ErrorKind::resource_cap,
                  "DP frontier reached " + std::to_string(next.size()) +
                      " states (cap " + std::to_string(options.state_cap) +
                      ") at leaf count " + std::to_string(leaves));
    }
  }

  // Pick the reachable terminal state of minimum rounded objective; on exact
  // ties prefer the lexicographically greatest load vector.
  const Frontier& terminal = layers.back();
  const State* best_state = nullptr;
  double best_objective = 0.0;
  for (const auto& [state, leaf] : terminal) {
    const double objective =
        rounded_objective(heights, disc.delta, disc.total_weight, state);
    if (best_state == nullptr || objective < best_objective ||
        (objective == best_objective && state > *best_state)) {
      best_state = &state;
      best_objective = objective;
    }
  }
  result.rounded_objective = best_objective;
  result.terminal = *best_state;

  State cursor = *best_state;
  for (std::size_t t = steps.size(); t-- > 0;) {
    const int leaf = layers[t + 1].at(cursor);
    result.assignment.leaf_of[steps[t]] = leaf;
    if (leaf < leaves - 1) cursor[leaf] -= disc.weights[steps[t]];
  }

  // Reachability soundness: replaying the reconstructed assignment must land
  // back on the claimed terminal state.
  State replay(leaves - 1, 0);
  for (int u = 0; u < unit_count; ++u) {
    const int leaf = result.assignment.leaf_of[u];
    if (leaf < leaves - 1) replay[leaf] += disc.weights[u];
  }
  if (replay != result.terminal) {
    throw Error(ErrorKind::internal, "DP reconstruction diverged from its terminal state");
  }

  // Rounding-gap invariant: the true and rounded objectives of the returned
  // assignment differ by at most K*delta <= epsilon.
  if (disc.exact_masses.size() == disc.weights.size()) {
    std::vector<double> exact(leaves, 0.0);
    for (int u = 0; u < unit_count; ++u) {
      exact[result.assignment.leaf_of[u]] += disc.exact_masses[u];
    }
    const double true_objective = divergence(exact, heights);
    const double epsilon = std::cbrt(2.0 * disc.delta);
    if (std::abs(true_objective - best_objective) > epsilon + 1e-9) {
      throw Error(ErrorKind::internal,
                  "rounded objective gap " +
                      std::to_string(std::abs(true_objective - best_objective)) +
                      " exceeds epsilon " + std::to_string(epsilon));
    }
  }
  return result;
}

}  // namespace tpp
