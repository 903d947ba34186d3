#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adiabatic/analysis.hpp"
#include "adiabatic/model.hpp"

namespace adiabatic {

/// Everything a CLI run depends on. Two runs with equal configs (ignoring
/// out_dir and parallel) write byte-identical files.
struct ExperimentConfig {
  /// {"n", "f"} | {"n", "cost": "grover", "marked"} | {"n", "cost": "random-int"}.
  /// Null selects the Grover family with n = 5, marked = 0.
  nlohmann::json problem;
  /// {"kind": "linear", "T"} | {"kind": "tabulated", "points": [[t, s], ...]}. Null means linear.
  nlohmann::json schedule;
  std::size_t grid_points = 1001;
  std::vector<double> grid;  // overrides grid_points when non-empty
  std::vector<std::size_t> k_list;
  bool full_k = false;
  std::optional<double> dt;
  std::vector<double> T_list;
  double tol = kDefaultMajorizationTolerance;
  TailWindow tail;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  unsigned parallel = 1;
};

inline const std::vector<std::string> kCommands = {"ground-curve", "evolve", "verify-ground", "verify-actual",
                                                   "bounds",       "gap",    "sweep",         "figure1"};

/// Reads a JSON config file. Relative problem-file paths resolve against the
/// config file's directory.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Canonical JSON of the output-relevant fields.
nlohmann::json canonical_json(const ExperimentConfig& config);
/// SHA-256 of canonical_json(config).dump(), lowercase hex.
std::string config_hash(const ExperimentConfig& config);

ProblemSpec resolve_problem(const ExperimentConfig& config);
Schedule resolve_schedule(const ExperimentConfig& config);
std::vector<double> resolve_grid(const ExperimentConfig& config);

/// Exit codes: 0 success, 1 config error, 2 invariant failure, 3 numerical failure.
int run(const std::string& command, const ExperimentConfig& config, std::ostream& log);

/// Parses command-line arguments and dispatches to run().
int run_cli(int argc, const char* const* argv, std::ostream& log);

}  // namespace adiabatic
