#include "tpp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tpp {

namespace {

constexpr double kSumTolerance = 1e-9;

}  // namespace

std::int64_t ceil_int(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

TokenDistribution load_distribution(const std::vector<double>& raw,
                                    bool normalize) {
  if (raw.empty()) {
    throw Error(ErrorKind::invalid_input, "distribution is empty");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0.0 || !std::isfinite(raw[i])) {
      throw Error(ErrorKind::invalid_input,
                  "negative or non-finite probability at index " +
                      std::to_string(i));
    }
    total += raw[i];
  }
  if (total <= 0.0) {
    throw Error(ErrorKind::invalid_input, "distribution has zero total mass");
  }
  if (!normalize && std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total
        << "; pass normalize=true or provide a normalized input";
    throw Error(ErrorKind::invalid_input, msg.str());
  }

  TokenDistribution out;
  out.probs.reserve(raw.size());
  out.token_ids.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double p = raw[i];
    if (normalize && total != 1.0) p /= total;
    if (p == 0.0) {
      out.dropped_zeros.push_back(static_cast<int>(i));
      continue;
    }
    out.probs.push_back(p);
    out.token_ids.push_back(static_cast<int>(i));
  }

  // Stable sort keeps the original order among equal masses, which pins the
  // token_ids permutation.
  std::vector<int> order(out.probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return out.probs[a] > out.probs[b];
  });
  TokenDistribution sorted;
  sorted.dropped_zeros = std::move(out.dropped_zeros);
  sorted.probs.reserve(order.size());
  sorted.token_ids.reserve(order.size());
  for (int idx : order) {
    sorted.probs.push_back(out.probs[idx]);
    sorted.token_ids.push_back(out.token_ids[idx]);
  }
  return sorted;
}

Classification classify(const TokenDistribution& dist, double rate_floor,
                        double epsilon) {
  if (rate_floor <= 0.0) {
    throw Error(ErrorKind::invalid_input, "rate floor must be positive");
  }
  if (epsilon <= 0.0 || epsilon >= 1.0) {
    throw Error(ErrorKind::invalid_input, "epsilon must lie in (0,1)");
  }
  Classification cls;
  cls.theta = epsilon * std::exp2(-rate_floor / epsilon);
  for (int i = 0; i < dist.size(); ++i) {
    if (dist.probs[i] <= cls.theta) {
      cls.small_indices.push_back(i);
    } else {
      cls.large_indices.push_back(i);
    }
  }
  return cls;
}

ProblemInstance make_instance(TokenDistribution dist, double rate_floor,
                              double epsilon) {
  if (rate_floor <= 0.0) {
    throw Error(ErrorKind::invalid_input, "rate floor must be positive");
  }
  if (epsilon <= 0.0 || epsilon >= 1.0) {
    throw Error(ErrorKind::invalid_input, "epsilon must lie in (0,1)");
  }
  ProblemInstance inst;
  inst.rate_floor = rate_floor;
  inst.epsilon = epsilon;
  inst.d = static_cast<int>(std::max<std::int64_t>(
      1, ceil_int(std::log2(1.0 / epsilon))));
  std::int64_t exponent = ceil_int(rate_floor / epsilon);
  if (exponent > 62) {
    throw Error(ErrorKind::guard_violation,
                "R/epsilon = " + std::to_string(rate_floor / epsilon) +
                    " makes the repair subtree astronomically large");
  }
  inst.subtree_leaves = std::int64_t{1} << exponent;
  inst.classification = classify(dist, rate_floor, epsilon);
  inst.dist = std::move(dist);
  return inst;
}

AssumptionReport check_assumptions(const ProblemInstance& inst) {
  AssumptionReport report;
  const int n = inst.dist.size();
  const double needed_support = std::exp2(inst.rate_floor);

  {
    std::ostringstream d;
    report.support_size.pass = n >= needed_support - 1e-9;
    d << "n = " << n << " vs 2^R = " << needed_support;
    report.support_size.detail = d.str();
  }
  {
    const std::int64_t small =
        static_cast<std::int64_t>(inst.classification.small_indices.size());
    const std::int64_t needed =
        inst.subtree_leaves + ceil_int(1.0 / inst.epsilon);
    std::ostringstream d;
    report.small_item_pool.pass = small >= needed;
    d << "|small| = " << small << " vs T_L + ceil(1/eps) = " << needed;
    report.small_item_pool.detail = d.str();
  }
  {
    const std::int64_t needed = ceil_int(1.0 / inst.epsilon);
    std::ostringstream d;
    report.epsilon_regime.pass = inst.subtree_leaves >= needed;
    d << "T_L = " << inst.subtree_leaves << " vs ceil(1/eps) = " << needed;
    report.epsilon_regime.detail = d.str();
  }
  return report;
}

std::string AssumptionReport::failure_summary() const {
  std::ostringstream msg;
  if (!support_size.pass) {
    msg << "Assumption 1 (support size) failed: " << support_size.detail
        << ". ";
  }
  if (!small_item_pool.pass) {
    msg << "Assumption 2 (small item pool) failed: " << small_item_pool.detail
        << ". ";
  }
  if (!epsilon_regime.pass) {
    msg << "Assumption 3 (epsilon regime) failed: " << epsilon_regime.detail
        << ". ";
  }
  return msg.str();
}

}  // namespace tpp
