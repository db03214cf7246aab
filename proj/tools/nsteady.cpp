#include <CLI11.hpp>
#include <iostream>

#include "nsteady/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nsteady: steady-state and evolution runs on a periodic box"};
  app.require_subcommand(1);

  std::string config_path, output_dir, experiment_name;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")
        ->required();
    cmd->add_option("--output", output_dir, "output directory override");
    cmd->add_option("--seed", seed, "force seed override")
        ->each([&](const std::string&) { seed_set = true; });
  };

  add_common(app.add_subcommand("solve", "steady solve: force, Picard, snapshots"));
  add_common(app.add_subcommand("norms", "steady solve plus Lp/weak norm sweep"));
  add_common(app.add_subcommand("analyze", "steady solve plus far-field analysis"));
  add_common(app.add_subcommand("evolve", "steady solve plus time evolution"));
  CLI::App* exp = app.add_subcommand("experiment", "named end-to-end scenario");
  add_common(exp);
  exp->add_option("name", experiment_name, "large_data | nonexistence");

  CLI11_PARSE(app, argc, argv);

  nsteady::RunOverrides overrides;
  if (!output_dir.empty()) overrides.output_dir = output_dir;
  if (seed_set) overrides.seed = seed;
  if (!experiment_name.empty()) overrides.experiment = experiment_name;

  return nsteady::run_subcommand(app.get_subcommands().front()->get_name(),
                                 config_path, overrides, std::cerr);
}
