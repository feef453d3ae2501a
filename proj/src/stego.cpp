#include "tpp/stego.hpp"

#include <algorithm>
#include <cmath>

namespace tpp {

namespace {

// Stateless counter-based generator: every (seed, counter) pair maps to an
// independent uniform draw, so encoding is reproducible and splittable.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double uniform_draw(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr int kHeaderBits = 32;

}  // namespace

std::string hex_to_bits(const std::string& hex) {
  std::string bits;
  bits.reserve(hex.size() * 4);
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw Error(ErrorKind::invalid_input,
                  std::string("invalid hex digit '") + c + "'");
    }
    for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1 ? '1' : '0');
  }
  return bits;
}

std::string bits_to_hex(const std::string& bits) {
  if (bits.size() % 4 != 0) {
    throw Error(ErrorKind::invalid_input,
                "bit string length must be a multiple of 4 for hex output");
  }
  static const char digits[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(bits.size() / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (int b = 0; b < 4; ++b) v = (v << 1) | (bits[i + b] == '1');
    hex.push_back(digits[v]);
  }
  return hex;
}

Codec build_codec(const Solution& sol, const TokenDistribution& dist) {
  if (!sol.partition.surjective()) {
    throw Error(ErrorKind::invalid_input,
                "codec needs a surjective partition: every leaf must carry a token");
  }
  if (sol.heights.max_depth() < 1) {
    throw Error(ErrorKind::invalid_input,
                "the root-only tree carries no bits and cannot encode");
  }
  Codec codec{sol.heights,
              sol.partition,
              canonical_path_labels(sol.heights.depths()),
              std::vector<int>(dist.size(), -1),
              {},
              dist.token_ids,
              {}};

  // The canonical construction is prefix-free whenever the depths are
  // Kraft-tight; keep the direct check as a codec invariant anyway.
  for (std::size_t a = 0; a < codec.path_labels.size(); ++a) {
    for (std::size_t b = a + 1; b < codec.path_labels.size(); ++b) {
      const auto& shorter = codec.path_labels[a].size() <= codec.path_labels[b].size()
                                ? codec.path_labels[a]
                                : codec.path_labels[b];
      const auto& longer = codec.path_labels[a].size() <= codec.path_labels[b].size()
                               ? codec.path_labels[b]
                               : codec.path_labels[a];
      if (longer.compare(0, shorter.size(), shorter) == 0) {
        throw Error(ErrorKind::internal, "canonical labels are not prefix-free");
      }
    }
  }

  codec.leaf_cdf.resize(sol.partition.leaf_count());
  for (int j = 0; j < sol.partition.leaf_count(); ++j) {
    double mass = 0.0;
    for (int idx : sol.partition.sets[j]) mass += dist.probs[idx];
    double acc = 0.0;
    for (int idx : sol.partition.sets[j]) {
      codec.token_to_leaf[idx] = j;
      acc += dist.probs[idx] / mass;
      codec.leaf_cdf[j].push_back(acc);
    }
    codec.leaf_cdf[j].back() = 1.0;
  }
  for (int idx = 0; idx < dist.size(); ++idx) {
    if (codec.token_to_leaf[idx] < 0) {
      throw Error(ErrorKind::invalid_input,
                  "partition does not cover token index " + std::to_string(idx));
    }
    codec.id_to_internal.emplace(dist.token_ids[idx], idx);
  }
  return codec;
}

std::vector<int> encode(const Codec& codec, const std::string& payload_bits,
                        std::uint64_t rng_seed) {
  for (char c : payload_bits) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::invalid_input, "payload must be a 0/1 bit string");
    }
  }
  if (payload_bits.size() > 0xffffffffull) {
    throw Error(ErrorKind::invalid_input, "payload exceeds the 32-bit header");
  }

  std::string stream;
  stream.reserve(kHeaderBits + payload_bits.size());
  const std::uint32_t length = static_cast<std::uint32_t>(payload_bits.size());
  for (int b = kHeaderBits - 1; b >= 0; --b) {
    stream.push_back((length >> b) & 1u ? '1' : '0');
  }
  stream += payload_bits;

  // Label -> leaf lookup for the walk.
  std::unordered_map<std::string, int> leaf_of_label;
  for (std::size_t j = 0; j < codec.path_labels.size(); ++j) {
    leaf_of_label.emplace(codec.path_labels[j], static_cast<int>(j));
  }

  std::vector<int> tokens;
  std::size_t pos = 0;
  std::uint64_t counter = 0;
  while (pos < stream.size()) {
    std::string prefix;
    int leaf = -1;
    while (leaf < 0) {
      // Virtual zero bits pad the final partial path.
      prefix.push_back(pos < stream.size() ? stream[pos] : '0');
      ++pos;
      auto it = leaf_of_label.find(prefix);
      if (it != leaf_of_label.end()) leaf = it->second;
    }
    const auto& cdf = codec.leaf_cdf[leaf];
    const double u = uniform_draw(rng_seed, counter++);
    const std::size_t pick =
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    const int internal =
        codec.partition.sets[leaf][std::min(pick, cdf.size() - 1)];
    tokens.push_back(codec.token_ids[internal]);
  }
  return tokens;
}

std::string decode(const Codec& codec, const std::vector<int>& tokens) {
  std::string bits;
  for (int id : tokens) {
    auto it = codec.id_to_internal.find(id);
    if (it == codec.id_to_internal.end()) {
      throw Error(ErrorKind::invalid_input,
                  "token " + std::to_string(id) + " is not in the codec support");
    }
    bits += codec.path_labels[codec.token_to_leaf[it->second]];
  }
  if (bits.size() < kHeaderBits) {
    throw Error(ErrorKind::invalid_input,
                "token stream too short for the 32-bit length header");
  }
  std::uint64_t length = 0;
  for (int b = 0; b < kHeaderBits; ++b) {
    length = (length << 1) | (bits[b] == '1' ? 1u : 0u);
  }
  if (bits.size() - kHeaderBits < length) {
    throw Error(ErrorKind::invalid_input,
                "truncated stream: header declares " + std::to_string(length) +
                    " payload bits but only " +
                    std::to_string(bits.size() - kHeaderBits) + " are present");
  }
  return bits.substr(kHeaderBits, length);
}

}  // namespace tpp
