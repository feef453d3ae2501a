#include "tpp/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tpp {

namespace {

std::vector<std::vector<int>> partition_to_original_ids(
    const Partition& partition, const TokenDistribution& dist) {
  std::vector<std::vector<int>> out;
  out.reserve(partition.sets.size());
  for (const auto& s : partition.sets) {
    std::vector<int> ids;
    ids.reserve(s.size());
    for (int idx : s) ids.push_back(dist.token_ids[idx]);
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace

nlohmann::json units_to_json(const std::vector<AtomicUnit>& units) {
  nlohmann::json j = nlohmann::json::array();
  for (const AtomicUnit& u : units) {
    nlohmann::json entry;
    switch (u.kind) {
      case AtomicUnit::Kind::heavy:
        entry["kind"] = "heavy";
        break;
      case AtomicUnit::Kind::block:
        entry["kind"] = "block";
        break;
      case AtomicUnit::Kind::residual:
        entry["kind"] = "residual";
        break;
    }
    entry["mass"] = u.mass;
    entry["members"] = u.members;
    j.push_back(std::move(entry));
  }
  return j;
}

TokenDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array()) {
    throw Error(ErrorKind::invalid_input,
                "distribution JSON must be an object with a \"probs\" array");
  }
  std::vector<double> raw;
  raw.reserve(j["probs"].size());
  for (const auto& v : j["probs"]) {
    if (!v.is_number()) {
      throw Error(ErrorKind::invalid_input,
                  "\"probs\" entries must be numbers");
    }
    raw.push_back(v.get<double>());
  }
  const bool normalize = j.value("normalize", false);
  return load_distribution(raw, normalize);
}

nlohmann::json solution_to_json(const Solution& sol,
                                const TokenDistribution& dist) {
  nlohmann::json j;
  j["branch"] = sol.branch;
  j["divergence"] = sol.divergence;
  j["heights"] = sol.heights.depths();
  j["partition"] = partition_to_original_ids(sol.partition, dist);
  j["rate"] = sol.rate;
  return j;
}

Solution solution_from_json(const nlohmann::json& j,
                            const TokenDistribution& dist) {
  for (const char* key : {"branch", "divergence", "heights", "partition", "rate"}) {
    if (!j.contains(key)) {
      throw Error(ErrorKind::invalid_input,
                  std::string("solution JSON is missing \"") + key + "\"");
    }
  }
  std::vector<int> depths = j["heights"].get<std::vector<int>>();
  HeightVector heights(std::move(depths));

  std::unordered_map<int, int> internal_of;
  for (int idx = 0; idx < dist.size(); ++idx) {
    internal_of.emplace(dist.token_ids[idx], idx);
  }
  std::vector<std::vector<int>> sets;
  for (const auto& leaf : j["partition"]) {
    std::vector<int> s;
    for (const auto& id : leaf) {
      auto it = internal_of.find(id.get<int>());
      if (it == internal_of.end()) {
        throw Error(ErrorKind::invalid_input,
                    "solution references token id " +
                        std::to_string(id.get<int>()) +
                        " absent from the distribution");
      }
      s.push_back(it->second);
    }
    sets.push_back(std::move(s));
  }
  Partition partition = make_partition(std::move(sets), dist.probs);

  return Solution{std::move(partition),
                  std::move(heights),
                  j["divergence"].get<double>(),
                  j["rate"].get<double>(),
                  j["branch"].get<std::string>(),
                  0,
                  0,
                  0.0,
                  {}};
}

nlohmann::json oracle_to_json(const OracleResult& result,
                              const TokenDistribution& dist) {
  nlohmann::json j;
  j["heights"] = result.opt_heights.depths();
  j["opt_divergence"] = result.opt_divergence;
  j["partition"] = partition_to_original_ids(result.opt_partition, dist);
  j["search_space_size"] = result.search_space_size;
  return j;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::invalid_input, "cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::invalid_input,
                "failed to parse " + path + ": " + e.what());
  }
  return j;
}

TokenDistribution load_distribution_file(const std::string& path) {
  return distribution_from_json(read_json_file(path));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::invalid_input, "cannot write " + path);
  }
  out << text;
}

}  // namespace tpp
