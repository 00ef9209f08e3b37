#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hlab/experiments.hpp"

namespace hlab::cli {

enum ExitCode : int { pass = 0, check_failed = 1, usage_error = 2, numeric_error = 3 };

/// Everything a run needs. Serialised into every report so that a run can be repeated
/// from its own output.
struct RunConfig {
  std::string command;  // nc | moments | simulate | check | demo
  std::string target;   // check and demo targets
  std::optional<std::string> profile;
  std::optional<int> truncate;
  bool symmetrize = false;
  std::optional<std::string> nu;
  std::optional<double> alpha;
  std::string model = "hadamard";
  int n = 1000;
  int grid = 0;  // spectral grid K, 0 = default
  int n_max = 6;
  int m = 3;
  int k = 10;
  std::uint64_t master_seed = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t mc_samples = 200000;
  int integration_grid = 64;
  std::string out = "results";
  int threads = 1;
  double eps = 0.05;

  /// Throws ConfigError on any guard violation.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Unknown keys and ill-typed values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// "3" expands to master, master+1, master+2; "4,9,12" is taken literally.
std::vector<std::uint64_t> parse_seeds(const std::string& text, std::uint64_t master);

/// Parses argv into a validated RunConfig. --help prints and returns nullopt.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

ExperimentOptions experiment_options(const RunConfig& cfg);

/// Executes the run; returns the process exit code. Diagnostics go to err as one line.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_command_line + execute with errors mapped to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hlab::cli
