#pragma once

#include <vector>

#include "tpp/distribution.hpp"
#include "tpp/tree.hpp"

namespace tpp {

/// An assignable object of the blocked instance: a single heavy token, a
/// closed block of tiny tokens with mass in [eps^2, 2*eps^2), or the one
/// residual block of leftover tiny mass below eps^2.
struct AtomicUnit {
  enum class Kind { heavy, block, residual };

  Kind kind = Kind::heavy;
  std::vector<int> members;  // sorted-distribution token indices
  double mass = 0.0;         // sum of member probabilities
};

/// Unit-to-leaf map produced by the assignment DP.
struct AtomicAssignment {
  std::vector<int> leaf_of;  // unit u -> leaf index in [0, leaf_count)
  int leaf_count = 0;
};

/// Greedy blocking of tiny items: tokens with mass >= eps^2 stay
/// heavy; the remaining tokens are consumed in non-increasing mass order and
/// a block closes the first time it reaches eps^2. Leftover mass below eps^2
/// forms the single residual unit.
std::vector<AtomicUnit> build_atomic_units(const TokenDistribution& dist,
                                           double epsilon);

/// Expands a unit-level assignment into a token-level partition. Leaf masses
/// equal the per-leaf sums of unit masses; empty leaves are allowed here.
Partition unpack(const AtomicAssignment& assignment,
                 const std::vector<AtomicUnit>& units);

}  // namespace tpp
