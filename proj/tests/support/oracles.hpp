#pragma once

// Independent reference implementations the tests check the library against.
// Nothing here shares code with the production paths it verifies.

#include <cmath>
#include <set>
#include <vector>

#include "tpp/assignment_dp.hpp"
#include "tpp/blocking.hpp"
#include "tpp/tree.hpp"

namespace tpp_test {

/// Depth multisets of full binary trees of height <= budget, found by
/// enumerating actual tree shapes: a shape is a leaf or an ordered pair of
/// shapes one level down (T(k) = 1 + T(k-1)^2), then deduplicating the
/// collected leaf-depth multisets.
inline std::set<std::vector<int>> shape_depth_multisets(int budget) {
  if (budget == 0) return {{0}};
  const std::set<std::vector<int>> sub = shape_depth_multisets(budget - 1);
  std::set<std::vector<int>> out;
  out.insert({0});
  for (const auto& left : sub) {
    for (const auto& right : sub) {
      std::vector<int> merged;
      merged.reserve(left.size() + right.size());
      for (int h : left) merged.push_back(h + 1);
      for (int h : right) merged.push_back(h + 1);
      std::sort(merged.begin(), merged.end());
      out.insert(std::move(merged));
    }
  }
  return out;
}

/// Walks every one of the L^K explicit unit assignments.
template <typename Visit>
void for_each_assignment(int unit_count, int leaves, Visit&& visit) {
  std::vector<int> leaf_of(unit_count, 0);
  for (;;) {
    visit(const_cast<const std::vector<int>&>(leaf_of));
    int u = unit_count - 1;
    while (u >= 0 && ++leaf_of[u] == leaves) leaf_of[u--] = 0;
    if (u < 0) break;
  }
}

/// Minimum rounded objective over all explicit assignments, evaluated from
/// first principles (all L absolute deviations, no implicit last leaf).
inline double brute_min_rounded_objective(const tpp::DiscretizedInstance& disc,
                                          const tpp::HeightVector& heights) {
  const int leaves = heights.leaf_count();
  const int units = static_cast<int>(disc.weights.size());
  double best = std::numeric_limits<double>::infinity();
  for_each_assignment(units, leaves, [&](const std::vector<int>& leaf_of) {
    std::vector<long long> load(leaves, 0);
    for (int u = 0; u < units; ++u) load[leaf_of[u]] += disc.weights[u];
    double objective = 0.0;
    for (int j = 0; j < leaves; ++j) {
      objective += std::abs(std::ldexp(1.0, -heights.depths()[j]) -
                            disc.delta * static_cast<double>(load[j]));
    }
    best = std::min(best, objective);
  });
  return best;
}

/// Minimum true (exact-mass) objective over all explicit unit assignments.
inline double brute_min_true_objective(const std::vector<tpp::AtomicUnit>& units,
                                       const tpp::HeightVector& heights) {
  const int leaves = heights.leaf_count();
  const int count = static_cast<int>(units.size());
  double best = std::numeric_limits<double>::infinity();
  for_each_assignment(count, leaves, [&](const std::vector<int>& leaf_of) {
    std::vector<double> mass(leaves, 0.0);
    for (int u = 0; u < count; ++u) mass[leaf_of[u]] += units[u].mass;
    double objective = 0.0;
    for (int j = 0; j < leaves; ++j) {
      objective += std::abs(std::ldexp(1.0, -heights.depths()[j]) - mass[j]);
    }
    best = std::min(best, objective);
  });
  return best;
}

}  // namespace tpp_test
