// Command-line front end: solving, verification, oracle comparison, tree
// enumeration, stego round-trips and synthetic benchmarks.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "tpp/json_io.hpp"
#include "tpp/stego.hpp"

namespace {

int exit_code_for(const tpp::Error& e) {
  switch (e.kind()) {
    case tpp::ErrorKind::invalid_input:
    case tpp::ErrorKind::guard_violation:
      return 2;
    case tpp::ErrorKind::assumption_failure:
      return 3;
    case tpp::ErrorKind::infeasible:
    case tpp::ErrorKind::no_candidate:
      return 4;
    case tpp::ErrorKind::resource_cap:
      return 5;
    case tpp::ErrorKind::internal:
      return 1;
  }
  return 1;
}

std::uint64_t state_cap_from_env() {
  if (const char* env = std::getenv("TPP_STATE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "ignoring malformed TPP_STATE_CAP=\"" << env << "\"\n";
  }
  return tpp::SolveOptions{}.state_cap;
}

void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text << "\n";
  } else {
    tpp::write_text_file(output_path, text + "\n");
  }
}

std::string read_payload(const std::string& payload) {
  // "@file" reads hex from a file; anything else is inline hex.
  if (!payload.empty() && payload[0] == '@') {
    std::ifstream in(payload.substr(1));
    if (!in) {
      throw tpp::Error(tpp::ErrorKind::invalid_input,
                       "cannot open payload file " + payload.substr(1));
    }
    std::string hex;
    in >> hex;
    return hex;
  }
  return payload;
}

// Zipf-like masses p_i ~ i^(-s) with a per-trial lognormal jitter so repeated
// trials differ while staying deterministic under the seed.
std::vector<double> zipf_draw(int n, double s, std::mt19937_64& rng) {
  std::lognormal_distribution<double> jitter(0.0, 0.25);
  std::vector<double> raw(n);
  for (int i = 0; i < n; ++i) {
    raw[i] = std::pow(static_cast<double>(i + 1), -s) * jitter(rng);
  }
  return raw;
}

struct CommonArgs {
  std::string input;
  std::string output;
  double rate_floor = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  int jobs = 1;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-constrained dyadic tree-partitioning solver"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string solution_path;
  std::string payload;
  std::string tokens_path;
  int max_depth = 4;
  bool compare = false;
  double zipf_s = 1.1;
  int bench_n = 1000;
  int trials = 5;

  auto* cmd_solve = app.add_subcommand("solve", "run the approximation scheme");
  cmd_solve->add_option("--input", args.input, "distribution JSON")->required();
  cmd_solve->add_option("--rate", args.rate_floor, "rate floor R")->required();
  cmd_solve->add_option("--epsilon", args.epsilon, "accuracy epsilon")->required();
  cmd_solve->add_option("--output", args.output, "solution JSON path");
  cmd_solve->add_option("--jobs", args.jobs, "parallel candidate workers");

  auto* cmd_verify = app.add_subcommand("verify", "recheck a solution");
  cmd_verify->add_option("solution", solution_path, "solution JSON")->required();
  cmd_verify->add_option("--input", args.input, "distribution JSON")->required();
  cmd_verify->add_option("--rate", args.rate_floor, "rate floor R")->required();
  cmd_verify->add_option("--epsilon", args.epsilon, "accuracy epsilon")->required();

  auto* cmd_oracle = app.add_subcommand("oracle", "exhaustive desk-scale optimum");
  cmd_oracle->add_option("--input", args.input, "distribution JSON")->required();
  cmd_oracle->add_option("--rate", args.rate_floor, "rate floor R")->required();
  cmd_oracle->add_option("--max-depth", max_depth, "tree depth bound (<= 4)");
  cmd_oracle->add_option("--epsilon", args.epsilon,
                         "epsilon for --compare solve");
  cmd_oracle->add_option("--output", args.output, "oracle JSON path");
  cmd_oracle->add_flag("--compare", compare,
                       "also run solve and report the gap");

  auto* cmd_enum = app.add_subcommand("enum-trees", "list Kraft depth multisets");
  cmd_enum->add_option("--max-depth", max_depth, "depth bound")->required();
  cmd_enum->add_option("--output", args.output, "JSON path");

  auto* cmd_encode = app.add_subcommand("stego-encode", "embed payload bits");
  cmd_encode->add_option("solution", solution_path, "solution JSON")->required();
  cmd_encode->add_option("payload", payload, "hex payload or @file")->required();
  cmd_encode->add_option("--input", args.input, "distribution JSON")->required();
  cmd_encode->add_option("--seed", args.seed, "sampling seed");
  cmd_encode->add_option("--output", args.output, "token JSON path");

  auto* cmd_decode = app.add_subcommand("stego-decode", "recover payload bits");
  cmd_decode->add_option("solution", solution_path, "solution JSON")->required();
  cmd_decode->add_option("tokens", tokens_path, "token JSON array")->required();
  cmd_decode->add_option("--input", args.input, "distribution JSON")->required();
  cmd_decode->add_option("--output", args.output, "payload hex path");

  auto* cmd_bench = app.add_subcommand("bench", "synthetic Zipf benchmark");
  cmd_bench->add_option("--zipf-s", zipf_s, "Zipf exponent");
  cmd_bench->add_option("--n", bench_n, "support size");
  cmd_bench->add_option("--trials", trials, "number of trials");
  cmd_bench->add_option("--rate", args.rate_floor, "rate floor R")->required();
  cmd_bench->add_option("--epsilon", args.epsilon, "accuracy epsilon")->required();
  cmd_bench->add_option("--seed", args.seed, "trial seed");
  cmd_bench->add_option("--jobs", args.jobs, "parallel candidate workers");
  cmd_bench->add_option("--output", args.output, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_solve->parsed()) {
      const tpp::TokenDistribution dist =
          tpp::load_distribution_file(args.input);
      const tpp::ProblemInstance inst =
          tpp::make_instance(dist, args.rate_floor, args.epsilon);
      tpp::SolveOptions options;
      options.jobs = args.jobs;
      options.state_cap = state_cap_from_env();
      const tpp::Solution sol = tpp::solve(inst, options);
      emit(args.output, tpp::solution_to_json(sol, dist).dump(2));
      std::cerr << "divergence=" << sol.divergence << " rate=" << sol.rate
                << " branch=" << sol.branch
                << " candidates=" << sol.candidate_count
                << " elapsed_ms=" << sol.elapsed_ms << "\n";
      return 0;
    }

    if (cmd_verify->parsed()) {
      const tpp::TokenDistribution dist =
          tpp::load_distribution_file(args.input);
      const tpp::ProblemInstance inst =
          tpp::make_instance(dist, args.rate_floor, args.epsilon);
      const tpp::Solution sol =
          tpp::solution_from_json(tpp::read_json_file(solution_path), dist);
      const tpp::VerificationReport report = tpp::verify(sol, inst);
      for (const auto& check : report.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name;
        if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
        std::cout << "\n";
      }
      return report.all_pass() ? 0 : 1;
    }

    if (cmd_oracle->parsed()) {
      const tpp::TokenDistribution dist =
          tpp::load_distribution_file(args.input);
      const tpp::OracleResult result =
          tpp::brute_force(dist, args.rate_floor, max_depth);
      emit(args.output, tpp::oracle_to_json(result, dist).dump(2));
      if (compare) {
        if (args.epsilon <= 0.0) {
          throw tpp::Error(tpp::ErrorKind::invalid_input,
                           "--compare needs --epsilon for the solve run");
        }
        const tpp::ProblemInstance inst =
            tpp::make_instance(dist, args.rate_floor, args.epsilon);
        const tpp::Solution sol = tpp::solve(inst);
        std::cerr << "solve=" << sol.divergence
                  << " opt=" << result.opt_divergence
                  << " gap=" << sol.divergence - result.opt_divergence
                  << " bound=" << 12.0 * args.epsilon << "\n";
      }
      return 0;
    }

    if (cmd_enum->parsed()) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& c : tpp::enumerate_height_vectors(max_depth)) {
        j.push_back(c.heights.depths());
      }
      emit(args.output, j.dump());
      std::cerr << j.size() << " height vectors at max depth " << max_depth
                << "\n";
      return 0;
    }

    if (cmd_encode->parsed()) {
      const tpp::TokenDistribution dist =
          tpp::load_distribution_file(args.input);
      const tpp::Solution sol =
          tpp::solution_from_json(tpp::read_json_file(solution_path), dist);
      const tpp::Codec codec = tpp::build_codec(sol, dist);
      const std::vector<int> tokens =
          tpp::encode(codec, tpp::hex_to_bits(read_payload(payload)), args.seed);
      emit(args.output, nlohmann::json(tokens).dump());
      std::cerr << tokens.size() << " tokens emitted\n";
      return 0;
    }

    if (cmd_decode->parsed()) {
      const tpp::TokenDistribution dist =
          tpp::load_distribution_file(args.input);
      const tpp::Solution sol =
          tpp::solution_from_json(tpp::read_json_file(solution_path), dist);
      const tpp::Codec codec = tpp::build_codec(sol, dist);
      const std::vector<int> tokens =
          tpp::read_json_file(tokens_path).get<std::vector<int>>();
      emit(args.output, tpp::bits_to_hex(tpp::decode(codec, tokens)));
      return 0;
    }

    if (cmd_bench->parsed()) {
      std::ostringstream csv;
      csv << "n,zipf_s,epsilon,R,divergence,rate,branch,candidates,"
             "frontier_max,millis\n";
      for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(args.seed + static_cast<std::uint64_t>(t));
        const tpp::TokenDistribution dist =
            tpp::load_distribution(zipf_draw(bench_n, zipf_s, rng), true);
        const tpp::ProblemInstance inst =
            tpp::make_instance(dist, args.rate_floor, args.epsilon);
        tpp::SolveOptions options;
        options.jobs = args.jobs;
        options.state_cap = state_cap_from_env();
        const tpp::Solution sol = tpp::solve(inst, options);
        csv << bench_n << ',' << zipf_s << ',' << args.epsilon << ','
            << args.rate_floor << ',' << sol.divergence << ',' << sol.rate
            << ',' << sol.branch << ',' << sol.candidate_count << ','
            << sol.max_frontier << ',' << sol.elapsed_ms << "\n";
      }
      std::string text = csv.str();
      if (!text.empty() && text.back() == '\n') text.pop_back();
      emit(args.output, text);
      return 0;
    }
  } catch (const tpp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
