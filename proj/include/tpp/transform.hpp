#pragma once

#include <utility>
#include <vector>

#include "tpp/distribution.hpp"
#include "tpp/tree.hpp"

namespace tpp {

/// Reserved small tokens: one seed per leaf to restore surjectivity, plus a
/// disjoint repair reserve used to populate the expanded subtree.
struct SeedSet {
  std::vector<int> seeds;           // exactly L distinct small-token indices
  std::vector<int> repair_reserve;  // T_L further indices, disjoint from seeds
};

/// Picks the L smallest-mass tokens as seeds and, when requested, the next
/// T_L smallest as the repair reserve. With require_small the whole pick must
/// lie inside the small-item set (the divergence bounds need that); without
/// it only the support size limits the pick.
SeedSet select_seeds(const ProblemInstance& inst, int leaf_count,
                     bool with_reserve, bool require_small = true);

/// Collapses every subtree hanging below depth d into a single depth-d leaf,
/// merging the corresponding partition sets. Never increases divergence; if
/// the input was deeper than d the output has a leaf at depth exactly d.
std::pair<Partition, HeightVector> truncate(const Partition& partition,
                                            const HeightVector& heights,
                                            int max_allowed_depth);

/// Reorders partition sets so leaf masses are non-increasing while depths
/// stay non-decreasing. Never increases divergence and is idempotent.
Partition monotone_reorder(const Partition& partition,
                           const HeightVector& heights);

/// Moves seed token j into leaf j for every leaf. The output is surjective
/// and the divergence changes by at most 2 * sum of seed masses.
Partition seed(const Partition& partition, const HeightVector& heights,
               const SeedSet& seeds, const TokenDistribution& dist);

/// Restores rate feasibility: migrates the reserve to the smallest-mass
/// depth-d leaf and replaces that leaf by a complete subtree of T_L leaves,
/// one reserve token per fresh sub-leaf. Kraft equality is preserved exactly
/// and the rate floor is met (throws otherwise).
std::pair<Partition, HeightVector> repair(const Partition& partition,
                                          const HeightVector& heights,
                                          const std::vector<int>& reserve,
                                          const ProblemInstance& inst);

}  // namespace tpp
