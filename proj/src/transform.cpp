#include "tpp/transform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace tpp {

namespace {

constexpr double kFpSlack = 1e-9;

std::vector<double> recompute_masses(const std::vector<std::vector<int>>& sets,
                                     const std::vector<double>& probs) {
  std::vector<double> masses;
  masses.reserve(sets.size());
  for (const auto& s : sets) {
    double m = 0.0;
    for (int idx : s) m += probs[idx];
    masses.push_back(m);
  }
  return masses;
}

std::vector<int> leaf_of_token(const Partition& partition, int support_size) {
  std::vector<int> where(support_size, -1);
  for (int j = 0; j < partition.leaf_count(); ++j) {
    for (int idx : partition.sets[j]) where[idx] = j;
  }
  return where;
}

void move_token(Partition& partition, std::vector<int>& where, int token,
                int target_leaf) {
  const int source = where[token];
  if (source == target_leaf) return;
  auto& src = partition.sets[source];
  src.erase(std::find(src.begin(), src.end(), token));
  partition.sets[target_leaf].push_back(token);
  where[token] = target_leaf;
}

}  // namespace

SeedSet select_seeds(const ProblemInstance& inst, int leaf_count,
                     bool with_reserve, bool require_small) {
  const int n = inst.dist.size();
  const auto small =
      static_cast<std::int64_t>(inst.classification.small_indices.size());
  const std::int64_t reserve_count = with_reserve ? inst.subtree_leaves : 0;
  const std::int64_t available = require_small ? small : n;
  if (available < leaf_count + reserve_count) {
    throw Error(ErrorKind::infeasible,
                "need " + std::to_string(leaf_count) + " seeds" +
                    (with_reserve
                         ? " plus " + std::to_string(reserve_count) +
                               " reserve tokens"
                         : std::string()) +
                    " but only " + std::to_string(available) +
                    (require_small ? " small" : "") + " tokens exist");
  }
  SeedSet out;
  // The distribution is sorted non-increasing, so the smallest masses sit at
  // the tail and are all below the small-item threshold.
  for (int j = 0; j < leaf_count; ++j) {
    out.seeds.push_back(n - leaf_count + j);
  }
  for (std::int64_t r = 0; r < reserve_count; ++r) {
    out.repair_reserve.push_back(
        static_cast<int>(n - leaf_count - reserve_count + r));
  }
  return out;
}

std::pair<Partition, HeightVector> truncate(const Partition& partition,
                                            const HeightVector& heights,
                                            int max_allowed_depth) {
  if (max_allowed_depth < 0) {
    throw Error(ErrorKind::invalid_input, "truncation depth must be >= 0");
  }
  if (partition.leaf_count() != heights.leaf_count()) {
    throw Error(ErrorKind::invalid_input,
                "partition and height vector disagree on leaf count");
  }
  if (heights.max_depth() <= max_allowed_depth) {
    return {partition, heights};
  }

  const std::vector<std::string> labels =
      canonical_path_labels(heights.depths());
  // Leaves at or above the cut keep their identity; deeper leaves merge by
  // their depth-d ancestor prefix of the canonical code.
  std::map<std::string, int> group_of_prefix;
  std::vector<std::vector<int>> sets;
  std::vector<double> masses;
  std::vector<int> depths;
  for (int j = 0; j < heights.leaf_count(); ++j) {
    const int h = heights.depths()[j];
    if (h <= max_allowed_depth) {
      sets.push_back(partition.sets[j]);
      masses.push_back(partition.masses[j]);
      depths.push_back(h);
      continue;
    }
    const std::string prefix = labels[j].substr(0, max_allowed_depth);
    auto [it, inserted] =
        group_of_prefix.try_emplace(prefix, static_cast<int>(sets.size()));
    if (inserted) {
      sets.emplace_back();
      masses.push_back(0.0);
      depths.push_back(max_allowed_depth);
    }
    auto& merged = sets[it->second];
    merged.insert(merged.end(), partition.sets[j].begin(),
                  partition.sets[j].end());
    masses[it->second] += partition.masses[j];
  }

  std::vector<int> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return depths[a] < depths[b]; });
  Partition out;
  std::vector<int> sorted_depths;
  for (int idx : order) {
    std::sort(sets[idx].begin(), sets[idx].end());
    out.sets.push_back(std::move(sets[idx]));
    out.masses.push_back(masses[idx]);
    sorted_depths.push_back(depths[idx]);
  }
  HeightVector truncated(std::move(sorted_depths));
  return {std::move(out), std::move(truncated)};
}

Partition monotone_reorder(const Partition& partition,
                           const HeightVector& heights) {
  if (partition.leaf_count() != heights.leaf_count()) {
    throw Error(ErrorKind::invalid_input,
                "partition and height vector disagree on leaf count");
  }
  std::vector<int> order(partition.leaf_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return partition.masses[a] > partition.masses[b];
  });
  Partition out;
  out.sets.reserve(order.size());
  out.masses.reserve(order.size());
  for (int idx : order) {
    out.sets.push_back(partition.sets[idx]);
    out.masses.push_back(partition.masses[idx]);
  }
  return out;
}

Partition seed(const Partition& partition, const HeightVector& heights,
               const SeedSet& seeds, const TokenDistribution& dist) {
  const int leaves = heights.leaf_count();
  if (static_cast<int>(seeds.seeds.size()) != leaves) {
    throw Error(ErrorKind::invalid_input,
                "seed set has " + std::to_string(seeds.seeds.size()) +
                    " entries for " + std::to_string(leaves) + " leaves");
  }
  const double before = divergence(partition.masses, heights);

  Partition out = partition;
  std::vector<int> where = leaf_of_token(out, dist.size());
  std::vector<char> taken(dist.size(), 0);
  double seed_mass = 0.0;
  for (int j = 0; j < leaves; ++j) {
    const int token = seeds.seeds[j];
    if (token < 0 || token >= dist.size() || where[token] < 0) {
      throw Error(ErrorKind::invalid_input,
                  "seed token " + std::to_string(token) +
                      " is not present in the partition");
    }
    if (taken[token]++) {
      throw Error(ErrorKind::invalid_input,
                  "seed tokens must be distinct; " + std::to_string(token) +
                      " repeats");
    }
    seed_mass += dist.probs[token];
    move_token(out, where, token, j);
  }
  for (auto& s : out.sets) std::sort(s.begin(), s.end());
  out.masses = recompute_masses(out.sets, dist.probs);

  const double after = divergence(out.masses, heights);
  if (std::abs(after - before) > 2.0 * seed_mass + kFpSlack) {
    throw Error(ErrorKind::internal,
                "seeding moved the divergence by more than twice the seed mass");
  }
  return out;
}

std::pair<Partition, HeightVector> repair(const Partition& partition,
                                          const HeightVector& heights,
                                          const std::vector<int>& reserve,
                                          const ProblemInstance& inst) {
  const int leaves = heights.leaf_count();
  if (heights.max_depth() != inst.d) {
    throw Error(ErrorKind::invalid_input,
                "repair needs a leaf at depth exactly d = " +
                    std::to_string(inst.d));
  }
  if (static_cast<std::int64_t>(reserve.size()) != inst.subtree_leaves) {
    throw Error(ErrorKind::invalid_input,
                "repair reserve has " + std::to_string(reserve.size()) +
                    " tokens, expected T_L = " +
                    std::to_string(inst.subtree_leaves));
  }
  for (int token : reserve) {
    if (token < 0 || token >= inst.dist.size() ||
        inst.dist.probs[token] > inst.classification.theta) {
      throw Error(ErrorKind::invalid_input,
                  "repair reserve token " + std::to_string(token) +
                      " is not a small item");
    }
  }

  const double before = divergence(partition.masses, heights);

  // The smallest mass lands on the deepest leaf, which carries the dyadic
  // target 2^-d; perturbing it is what keeps the expansion cheap.
  Partition work = monotone_reorder(partition, heights);
  const double reordered = divergence(work.masses, heights);
  if (reordered > before + kFpSlack) {
    throw Error(ErrorKind::internal, "monotone reorder increased divergence");
  }

  std::vector<int> where = leaf_of_token(work, inst.dist.size());
  const int deepest = leaves - 1;
  double migrated_mass = 0.0;
  for (int token : reserve) {
    if (where[token] < 0) {
      throw Error(ErrorKind::invalid_input,
                  "reserve token " + std::to_string(token) +
                      " is not present in the partition");
    }
    migrated_mass += inst.dist.probs[token];
    move_token(work, where, token, deepest);
  }

  const int tau =
      std::bit_width(static_cast<std::uint64_t>(inst.subtree_leaves)) - 1;
  const int sub_depth = inst.d + tau;
  const double sub_target = std::ldexp(1.0, -sub_depth);

  std::vector<int> depths(heights.depths().begin(),
                          heights.depths().end() - 1);
  std::vector<std::vector<int>> sets(work.sets.begin(), work.sets.end() - 1);

  // Sub-leaf 0 keeps everything that is not reserve (including the leaf's
  // seed) plus the first reserve token; each further reserve token gets its
  // own sub-leaf.
  std::vector<int> bulk = work.sets[deepest];
  for (std::size_t r = 1; r < reserve.size(); ++r) {
    bulk.erase(std::find(bulk.begin(), bulk.end(), reserve[r]));
  }
  std::sort(bulk.begin(), bulk.end());
  sets.push_back(std::move(bulk));
  depths.push_back(sub_depth);
  for (std::size_t r = 1; r < reserve.size(); ++r) {
    sets.push_back({reserve[r]});
    depths.push_back(sub_depth);
  }

  Partition out;
  out.masses = recompute_masses(sets, inst.dist.probs);
  out.sets = std::move(sets);
  HeightVector repaired(std::move(depths));

  const double after = divergence(out.masses, repaired);
  double eta = 0.0;
  for (std::size_t r = 1; r < reserve.size(); ++r) {
    eta += std::abs(inst.dist.probs[reserve[r]] - sub_target);
  }
  if (after > reordered + 2.0 * migrated_mass + 2.0 * eta + kFpSlack) {
    throw Error(ErrorKind::internal,
                "repair exceeded its migration + expansion divergence budget");
  }

  const double out_rate = rate(repaired);
  if (out_rate < inst.rate_floor - 1e-12) {
    throw Error(ErrorKind::infeasible,
                "repaired tree reaches rate " + std::to_string(out_rate) +
                    " below the floor " + std::to_string(inst.rate_floor));
  }
  return {std::move(out), std::move(repaired)};
}

}  // namespace tpp
