#include "tpp/blocking.hpp"

#include <algorithm>

namespace tpp {

std::vector<AtomicUnit> build_atomic_units(const TokenDistribution& dist,
                                           double epsilon) {
  if (epsilon <= 0.0 || epsilon >= 1.0) {
    throw Error(ErrorKind::invalid_input, "epsilon must lie in (0,1)");
  }
  const double threshold = epsilon * epsilon;
  std::vector<AtomicUnit> units;

  int i = 0;
  for (; i < dist.size() && dist.probs[i] >= threshold; ++i) {
    units.push_back(AtomicUnit{AtomicUnit::Kind::heavy, {i}, dist.probs[i]});
  }

  // The distribution is sorted, so the tiny tail is already in non-increasing
  // mass order; consuming it in place keeps the blocking deterministic.
  AtomicUnit current{AtomicUnit::Kind::block, {}, 0.0};
  for (; i < dist.size(); ++i) {
    current.members.push_back(i);
    current.mass += dist.probs[i];
    if (current.mass >= threshold) {
      units.push_back(std::move(current));
      current = AtomicUnit{AtomicUnit::Kind::block, {}, 0.0};
    }
  }
  if (!current.members.empty()) {
    current.kind = AtomicUnit::Kind::residual;
    units.push_back(std::move(current));
  }
  return units;
}

Partition unpack(const AtomicAssignment& assignment,
                 const std::vector<AtomicUnit>& units) {
  if (assignment.leaf_of.size() != units.size()) {
    throw Error(ErrorKind::invalid_input,
                "assignment covers " + std::to_string(assignment.leaf_of.size()) +
                    " units, expected " + std::to_string(units.size()));
  }
  std::vector<std::vector<int>> sets(assignment.leaf_count);
  std::vector<double> masses(assignment.leaf_count, 0.0);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const int leaf = assignment.leaf_of[u];
    if (leaf < 0 || leaf >= assignment.leaf_count) {
      throw Error(ErrorKind::invalid_input,
                  "unit " + std::to_string(u) + " assigned to leaf " +
                      std::to_string(leaf) + " outside [0, " +
                      std::to_string(assignment.leaf_count) + ")");
    }
    sets[leaf].insert(sets[leaf].end(), units[u].members.begin(),
                      units[u].members.end());
    masses[leaf] += units[u].mass;
  }
  Partition part;
  for (auto& s : sets) std::sort(s.begin(), s.end());
  part.sets = std::move(sets);
  part.masses = std::move(masses);
  return part;
}

}  // namespace tpp
