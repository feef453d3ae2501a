#pragma once

// Shared generators and small helpers for the test suites.

#include <algorithm>
#include <random>
#include <vector>

#include "tpp/distribution.hpp"
#include "tpp/tree.hpp"

namespace tpp_test {

inline std::vector<double> random_masses(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> raw(n);
  double total = 0.0;
  for (double& v : raw) {
    v = draw(rng) + 1e-9;
    total += v;
  }
  for (double& v : raw) v /= total;
  return raw;
}

inline tpp::TokenDistribution random_distribution(std::mt19937_64& rng, int n) {
  return tpp::load_distribution(random_masses(rng, n), true);
}

/// Random token -> leaf map, not necessarily surjective.
inline tpp::Partition random_assignment(std::mt19937_64& rng,
                                        const tpp::TokenDistribution& dist,
                                        int leaves) {
  std::uniform_int_distribution<int> pick(0, leaves - 1);
  std::vector<std::vector<int>> sets(leaves);
  for (int i = 0; i < dist.size(); ++i) sets[pick(rng)].push_back(i);
  return tpp::make_partition(std::move(sets), dist.probs);
}

/// Random surjective partition; requires n >= leaves.
inline tpp::Partition random_surjective_partition(
    std::mt19937_64& rng, const tpp::TokenDistribution& dist, int leaves) {
  std::vector<int> order(dist.size());
  for (int i = 0; i < dist.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> pick(0, leaves - 1);
  std::vector<std::vector<int>> sets(leaves);
  for (int j = 0; j < leaves; ++j) sets[j].push_back(order[j]);
  for (std::size_t k = leaves; k < order.size(); ++k) {
    sets[pick(rng)].push_back(order[k]);
  }
  return tpp::make_partition(std::move(sets), dist.probs);
}

inline double total_variation(const std::vector<double>& a,
                              const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return tv / 2.0;
}

}  // namespace tpp_test
