#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsteady/evolution.hpp"
#include "nsteady/forcing.hpp"
#include "nsteady/grid.hpp"
#include "nsteady/steady.hpp"

namespace nsteady {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optional initial-condition perturbation added on top of the steady solution
// (evolve) or used as the large initial bump (experiment).
struct PerturbationSpec {
  std::string kind = "none";  // none | gaussian_swirl | power_swirl
  double amplitude = 0.0;
  double width = 1.0;   // gaussian_swirl
  double decay = 1.0;   // power_swirl
  std::array<double, 3> axis{0.0, 0.0, 1.0};
};

struct AnalysisSpec {
  std::vector<double> p_list;
  double shell_r_min = 0.0, shell_r_max = 0.0;
  int shell_n = 8;
  std::string shell_stat = "l2_mean";  // or "max"
  bool profile_check = false;
  double rate_t0 = 0.0, rate_t1 = 0.0;  // fit window for evolve runs
  std::vector<double> rate_q;
};

struct RunConfig {
  int grid_n = 0;
  double box_length = 0.0;
  ForceSpec force;
  PicardConfig solver;
  std::optional<EvolutionConfig> evolution;
  PerturbationSpec perturbation;
  AnalysisSpec analysis;
  std::string output_dir = "out";
  std::uint64_t seed = 0;  // 0 = keep the seed from [force]
  std::string experiment;  // default name for the experiment subcommand

  std::string raw_text;  // config echo for the manifest

  Grid make_run_grid() const { return make_grid(grid_n, box_length); }
};

// Flat INI-style text: [section] headers, key = value pairs, '#' comments,
// comma-separated lists. Unknown sections or keys are errors (configs are
// part of the reproducibility record, typos must not pass silently).
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Cross-section consistency: grid constructible, annulus band inside the
// dealias sphere, evolution/perturbation parameters in range. Throws
// std::invalid_argument so violations map to the precondition exit code.
void validate_config(const RunConfig& cfg);

}  // namespace nsteady
