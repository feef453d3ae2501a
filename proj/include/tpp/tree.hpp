#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpp/errors.hpp"

namespace tpp {

/// Multiset of leaf depths of a full binary tree. Kraft's equality
/// sum_j 2^(-h_j) = 1 is verified exactly in integer units of 2^(-max_depth)
/// at construction; divergence and rate depend only on this multiset, never
/// on a particular tree shape.
class HeightVector {
 public:
  /// Sorts the depths and verifies exact Kraft equality.
  explicit HeightVector(std::vector<int> depths);

  const std::vector<int>& depths() const { return depths_; }
  int leaf_count() const { return static_cast<int>(depths_.size()); }
  int max_depth() const { return depths_.back(); }

  /// Leaf target mass 2^(-h_j).
  double target(int leaf) const;

  bool operator==(const HeightVector& other) const {
    return depths_ == other.depths_;
  }

 private:
  std::vector<int> depths_;  // sorted non-decreasing
};

/// True iff the depth multiset satisfies Kraft's equality exactly.
bool kraft_check(const std::vector<int>& depths);

/// Information rate sum_j 2^(-h_j) * h_j. Depends on the tree alone, so rate
/// feasibility can be decided before any partition is chosen.
double rate(const HeightVector& heights);

/// Total variation (unhalved) between leaf masses and the dyadic targets:
/// sum_j |2^(-h_j) - masses[j]|.
double divergence(const std::vector<double>& masses,
                  const HeightVector& heights);

struct CandidateHeight {
  HeightVector heights;
  bool has_max_depth_leaf;  // a leaf sits at depth exactly d_max
};

/// Every depth multiset satisfying Kraft's equality with max depth <= d_max,
/// each exactly once, in lexicographic order of the sorted depth list.
std::vector<CandidateHeight> enumerate_height_vectors(int d_max);

/// Token-to-leaf partition aligned with a HeightVector: sets[j] holds the
/// (sorted-distribution) indices on leaf j, masses[j] their total mass.
struct Partition {
  std::vector<std::vector<int>> sets;
  std::vector<double> masses;

  int leaf_count() const { return static_cast<int>(sets.size()); }
  bool surjective() const;
};

/// Builds a partition from index sets, computing masses from probs.
Partition make_partition(std::vector<std::vector<int>> sets,
                         const std::vector<double>& probs);

/// Canonical prefix code for a sorted depth list: leaf k gets the next
/// codeword of length depths[k] (previous + 1, left-justified). Kraft-tight
/// depth lists always admit this construction; the labels form a complete
/// prefix-free code.
std::vector<std::string> canonical_path_labels(const std::vector<int>& depths);

}  // namespace tpp
