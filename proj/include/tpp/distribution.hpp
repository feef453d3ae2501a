#pragma once

#include <cstdint>
#include <vector>

#include "tpp/errors.hpp"

namespace tpp {

/// Sorted categorical distribution. Probabilities are held in non-increasing
/// order; token_ids[i] is the position of probs[i] in the caller's original
/// array, so results can be reported in the caller's token space.
struct TokenDistribution {
  std::vector<double> probs;      // sorted non-increasing, sums to 1
  std::vector<int> token_ids;     // original index of each sorted entry
  std::vector<int> dropped_zeros; // original indices of zero-mass tokens

  int size() const { return static_cast<int>(probs.size()); }
};

/// Small/large split at the threshold theta = epsilon * 2^(-R/epsilon).
struct Classification {
  double theta = 0.0;
  std::vector<int> small_indices;  // sorted positions with p_i <= theta
  std::vector<int> large_indices;  // the complement
};

struct AssumptionCheck {
  bool pass = false;
  std::string detail;  // observed values, filled on failure and success
};

/// Pass/fail report for the three instance assumptions.
struct AssumptionReport {
  AssumptionCheck support_size;     // n >= 2^R
  AssumptionCheck small_item_pool;  // |small| >= T_L + ceil(1/eps)
  AssumptionCheck epsilon_regime;   // T_L >= ceil(1/eps)

  bool all_pass() const {
    return support_size.pass && small_item_pool.pass && epsilon_regime.pass;
  }
  std::string failure_summary() const;
};

/// A fully prepared problem: distribution, rate floor, accuracy target and
/// the derived integer parameters d (truncation depth) and T_L (repair
/// subtree leaf count).
struct ProblemInstance {
  TokenDistribution dist;
  double rate_floor = 0.0;  // R, bits per token
  double epsilon = 0.0;     // in (0,1)
  int d = 0;                // ceil(log2(1/epsilon)), >= 1
  std::int64_t subtree_leaves = 0;  // T_L = 2^ceil(R/epsilon), >= 2
  Classification classification;
};

/// Integer ceiling with a small nudge so quotients like 1/0.1 that land a few
/// ulps above an integer do not get bumped to the next one.
std::int64_t ceil_int(double x);

TokenDistribution load_distribution(const std::vector<double>& raw,
                                    bool normalize);

Classification classify(const TokenDistribution& dist, double rate_floor,
                        double epsilon);

ProblemInstance make_instance(TokenDistribution dist, double rate_floor,
                              double epsilon);

AssumptionReport check_assumptions(const ProblemInstance& inst);

}  // namespace tpp
