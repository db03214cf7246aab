#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "nsteady/config.hpp"

namespace nsteady {

// Process exit codes: each failure class is distinguishable from the shell.
enum class ExitCode : int {
  ok = 0,
  usage = 1,             // reserved for the CLI argument parser
  config_error = 2,      // config unreadable or malformed
  precondition = 3,      // config parsed but violates an operation contract
  solver_failure = 4,    // Picard did not converge (or aborted on growth)
  analysis_guard = 5,    // an analysis window/fit guard rejected the request
};

struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> experiment;  // experiment subcommand positional
};

// Executes one subcommand (solve | norms | analyze | evolve | experiment)
// against a config file and writes all artifacts under the output directory:
// manifest.json (deterministic; no timing data), timings.json (wall times,
// excluded from the manifest so repeated runs are bit-identical), NSF1
// snapshots and CSV series per stage. Errors are reported on `err` and mapped
// to the exit codes above; nothing is written unless the config is valid.
int run_subcommand(const std::string& subcommand, const std::string& config_path,
                   const RunOverrides& overrides, std::ostream& err);

}  // namespace nsteady
