#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpp/solver.hpp"

namespace tpp {

/// Steganography codec over a solved tree. Hidden bits pick a root-to-leaf
/// path through the canonical prefix code; a token is then sampled from the
/// leaf's conditional distribution, so decoding a token recovers its path
/// bits. Immutable after construction.
struct Codec {
  HeightVector heights;
  Partition partition;                     // sorted-distribution indices
  std::vector<std::string> path_labels;    // per leaf, complete prefix code
  std::vector<int> token_to_leaf;          // internal index -> leaf
  std::vector<std::vector<double>> leaf_cdf;  // intra-leaf sampling CDF
  std::vector<int> token_ids;              // internal index -> original id
  std::unordered_map<int, int> id_to_internal;
};

/// Bits are '0'/'1' strings throughout; hex helpers serve the CLI surface.
std::string hex_to_bits(const std::string& hex);
std::string bits_to_hex(const std::string& bits);

Codec build_codec(const Solution& sol, const TokenDistribution& dist);

/// Prepends a 32-bit big-endian payload-length header, walks root-to-leaf on
/// the header+payload bits (zero-padding the final partial path) and samples
/// one token per leaf visit with a seed-keyed counter generator. Returns
/// original token ids.
std::vector<int> encode(const Codec& codec, const std::string& payload_bits,
                        std::uint64_t rng_seed);

/// Concatenates the path labels of the tokens' leaves, strips the header and
/// returns exactly the declared payload bits.
std::string decode(const Codec& codec, const std::vector<int>& tokens);

}  // namespace tpp
