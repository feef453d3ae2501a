#pragma once

#include <string>

#include "json.hpp"
#include "tpp/blocking.hpp"
#include "tpp/solver.hpp"

namespace tpp {

/// Debug dump of the blocked instance.
nlohmann::json units_to_json(const std::vector<AtomicUnit>& units);

/// Parses `{"probs": [...], "normalize": bool?}` and loads the distribution.
TokenDistribution distribution_from_json(const nlohmann::json& j);

/// Solution schema: {"branch","divergence","heights","partition","rate"},
/// with partition sets given as original token ids. Deterministic output.
nlohmann::json solution_to_json(const Solution& sol,
                                const TokenDistribution& dist);
Solution solution_from_json(const nlohmann::json& j,
                            const TokenDistribution& dist);

nlohmann::json oracle_to_json(const OracleResult& result,
                              const TokenDistribution& dist);

TokenDistribution load_distribution_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tpp
