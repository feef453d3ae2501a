#include "tpp/tree.hpp"

#include <algorithm>
#include <cmath>

namespace tpp {

namespace {

constexpr int kMaxSupportedDepth = 120;  // keeps the Kraft accumulator exact
constexpr int kEnumerationDepthGuard = 20;
constexpr std::size_t kEnumerationOutputCap = 100000;

// Exact Kraft sum in units of 2^(-max). 128-bit accumulation leaves plenty
// of headroom for invalid inputs that overshoot 2^max.
bool kraft_exact(const std::vector<int>& depths) {
  if (depths.empty()) return false;
  int max_depth = *std::max_element(depths.begin(), depths.end());
  if (max_depth > kMaxSupportedDepth) {
    throw Error(ErrorKind::guard_violation,
                "leaf depth " + std::to_string(max_depth) +
                    " exceeds the supported maximum of " +
                    std::to_string(kMaxSupportedDepth));
  }
  unsigned __int128 units = 0;
  const unsigned __int128 one = static_cast<unsigned __int128>(1) << max_depth;
  for (int h : depths) {
    if (h < 0) return false;
    units += static_cast<unsigned __int128>(1) << (max_depth - h);
    if (units > one) return false;
  }
  return units == one;
}

// Emits count profiles (c_1..c_d) level by level: a level with N internal
// nodes exposes 2N slots, each either a leaf or an internal node of the next
// level. Descending on the leaf count per level yields the lexicographic
// order of sorted depth lists directly.
void enumerate_profiles(int level, int d_max, std::int64_t internal,
                        std::vector<int>& leaves_per_level,
                        std::vector<CandidateHeight>& out) {
  if (internal == 0) {
    std::vector<int> depths;
    for (int k = 0; k < static_cast<int>(leaves_per_level.size()); ++k) {
      depths.insert(depths.end(), leaves_per_level[k], k);
    }
    bool deepest = !depths.empty() && depths.back() == d_max;
    out.push_back(CandidateHeight{HeightVector(std::move(depths)), deepest});
    if (out.size() > kEnumerationOutputCap) {
      throw Error(ErrorKind::resource_cap,
                  "height-vector enumeration exceeded " +
                      std::to_string(kEnumerationOutputCap) +
                      " vectors at d_max = " + std::to_string(d_max));
    }
    return;
  }
  const std::int64_t slots = 2 * internal;
  if (level == d_max) {
    // Bottom level: every remaining slot must be a leaf.
    leaves_per_level.push_back(static_cast<int>(slots));
    enumerate_profiles(level + 1, d_max, 0, leaves_per_level, out);
    leaves_per_level.pop_back();
    return;
  }
  for (std::int64_t c = slots; c >= 0; --c) {
    leaves_per_level.push_back(static_cast<int>(c));
    enumerate_profiles(level + 1, d_max, slots - c, leaves_per_level, out);
    leaves_per_level.pop_back();
  }
}

}  // namespace

HeightVector::HeightVector(std::vector<int> depths) : depths_(std::move(depths)) {
  if (depths_.empty()) {
    throw Error(ErrorKind::invalid_input, "height vector has no leaves");
  }
  std::sort(depths_.begin(), depths_.end());
  if (depths_.front() < 0) {
    throw Error(ErrorKind::invalid_input, "negative leaf depth");
  }
  if (!kraft_exact(depths_)) {
    throw Error(ErrorKind::invalid_input,
                "leaf depths violate Kraft's equality");
  }
}

double HeightVector::target(int leaf) const {
  return std::ldexp(1.0, -depths_[leaf]);
}

bool kraft_check(const std::vector<int>& depths) {
  if (depths.empty()) return false;
  for (int h : depths) {
    if (h < 0) return false;
  }
  return kraft_exact(depths);
}

double rate(const HeightVector& heights) {
  double r = 0.0;
  for (int h : heights.depths()) {
    r += std::ldexp(static_cast<double>(h), -h);
  }
  return r;
}

double divergence(const std::vector<double>& masses,
                  const HeightVector& heights) {
  if (static_cast<int>(masses.size()) != heights.leaf_count()) {
    throw Error(ErrorKind::invalid_input,
                "mass vector length " + std::to_string(masses.size()) +
                    " does not match leaf count " +
                    std::to_string(heights.leaf_count()));
  }
  double total = 0.0;
  for (int j = 0; j < heights.leaf_count(); ++j) {
    total += std::abs(heights.target(j) - masses[j]);
  }
  return total;
}

std::vector<CandidateHeight> enumerate_height_vectors(int d_max) {
  if (d_max < 0 || d_max > kEnumerationDepthGuard) {
    throw Error(ErrorKind::guard_violation,
                "d_max = " + std::to_string(d_max) +
                    " outside guard range [0, " +
                    std::to_string(kEnumerationDepthGuard) + "]");
  }
  std::vector<CandidateHeight> out;
  // The root is either the sole leaf or the first internal node.
  out.push_back(CandidateHeight{HeightVector({0}), d_max == 0});
  if (d_max > 0) {
    std::vector<int> leaves_per_level{0};
    enumerate_profiles(1, d_max, 1, leaves_per_level, out);
  }
  std::sort(out.begin(), out.end(),
            [](const CandidateHeight& a, const CandidateHeight& b) {
              return a.heights.depths() < b.heights.depths();
            });
  return out;
}

bool Partition::surjective() const {
  for (const auto& s : sets) {
    if (s.empty()) return false;
  }
  return !sets.empty();
}

Partition make_partition(std::vector<std::vector<int>> sets,
                         const std::vector<double>& probs) {
  Partition part;
  part.masses.reserve(sets.size());
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    double mass = 0.0;
    for (int idx : s) {
      if (idx < 0 || idx >= static_cast<int>(probs.size())) {
        throw Error(ErrorKind::invalid_input,
                    "partition references token index " + std::to_string(idx) +
                        " outside the support");
      }
      mass += probs[idx];
    }
    part.masses.push_back(mass);
  }
  part.sets = std::move(sets);
  return part;
}

std::vector<std::string> canonical_path_labels(const std::vector<int>& depths) {
  if (!kraft_check(depths)) {
    throw Error(ErrorKind::invalid_input,
                "canonical labels need a Kraft-tight depth list");
  }
  if (!std::is_sorted(depths.begin(), depths.end())) {
    throw Error(ErrorKind::invalid_input,
                "canonical labels need depths sorted non-decreasing");
  }
  std::vector<std::string> labels;
  labels.reserve(depths.size());
  std::string code(depths.front(), '0');
  for (std::size_t k = 0; k < depths.size(); ++k) {
    if (k > 0) {
      // Binary increment, then left-justify to the new length.
      int i = static_cast<int>(code.size()) - 1;
      for (; i >= 0 && code[i] == '1'; --i) code[i] = '0';
      // Kraft tightness guarantees the increment never overflows before the
      // last codeword.
      code[i] = '1';
      code.append(depths[k] - depths[k - 1], '0');
    }
    labels.push_back(code);
  }
  return labels;
}

}  // namespace tpp
