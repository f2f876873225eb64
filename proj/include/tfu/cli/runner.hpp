#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tfu/cli/scenario.hpp"

namespace tfu::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAssertion = 2;

struct RunOptions {
  std::filesystem::path out_dir;
  bool timestamp = true;
  std::optional<std::string> only;  // run a single scenario
};

struct ScenarioOutcome {
  std::string name;
  bool passed = true;
  bool errored = false;
  std::vector<std::string> failures;  // one line per failed assertion or error
};

/// Runs every selected scenario, writing <name>.json (+ CSV sweeps) and
/// summary.json into out_dir. Never throws for per-scenario problems; those
/// land in the outcome.
std::vector<ScenarioOutcome> run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options);

/// Full `tfu run`: load, build, execute, print a summary to `log`. Returns the exit code.
int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log, std::ostream& err);

/// Writes `contents` to `path` through a temporary file and rename.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace tfu::cli
