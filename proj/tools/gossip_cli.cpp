// Command-line harness for the two-community gossip model: stochastic runs,
// exact expected dynamics, transient sign-window and consensus-bound checks,
// and the benchmark experiment presets.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "gossip/config.hpp"
#include "gossip/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<long> horizon;
  std::optional<int> replicates;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* config =
      cmd->add_option("--config", flags.config_path, "experiment config file");
  if (config_required) config->required();
  cmd->add_option("--seed", flags.seed, "override the RNG seed");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--horizon", flags.horizon, "override the time horizon");
  cmd->add_option("--replicates", flags.replicates,
                  "override the Monte Carlo replicate count");
}

void apply_overrides(gossip::ExperimentConfig& config, const CommonFlags& flags) {
  if (flags.seed) config.run.seed = *flags.seed;
  if (flags.out) config.output_dir = *flags.out;
  if (flags.horizon) config.run.horizon = *flags.horizon;
  if (flags.replicates) config.run.replicates = *flags.replicates;
}

int execute(const gossip::ExperimentConfig& config) {
  const gossip::ExperimentResult result = gossip::run_experiment(config);
  std::cout << result.summary;
  for (const auto& file : result.files_written)
    std::cout << "wrote " << file << "\n";
  const bool checks_ok =
      (!result.sign_reference || result.sign_reference->pass) &&
      (!result.sign_theorem || result.sign_theorem->pass) &&
      (!result.bound_report || result.bound_report->pass);
  return checks_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-community gossip opinion dynamics harness"};
  app.require_subcommand(1);

  CommonFlags simulate_flags, expect_flags, window_flags, bounds_flags,
      reproduce_flags;

  auto* simulate = app.add_subcommand(
      "simulate", "run the stochastic process (Monte Carlo mean with "
                  "--replicates > 1)");
  add_common(simulate, simulate_flags, true);

  auto* expect =
      app.add_subcommand("expect", "exact expected trajectory of the mean dynamics");
  add_common(expect, expect_flags, true);

  auto* window = app.add_subcommand(
      "window", "transient sign window and sign checks against the exact "
                "expectation");
  add_common(window, window_flags, true);

  auto* bounds = app.add_subcommand(
      "bounds", "local/global consensus envelope check (mode follows the "
                "graph regime)");
  add_common(bounds, bounds_flags, true);

  std::string preset_name;
  auto* reproduce =
      app.add_subcommand("reproduce", "run a benchmark experiment preset");
  reproduce->add_option("preset", preset_name, "preset name")
      ->required()
      ->check(CLI::IsMember(gossip::preset_names()));
  add_common(reproduce, reproduce_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      auto config = gossip::load_config(simulate_flags.config_path);
      apply_overrides(config, simulate_flags);
      config.analyses = {config.run.replicates > 1 ? gossip::Analysis::mc_mean
                                                   : gossip::Analysis::simulate};
      return execute(config);
    }
    if (expect->parsed()) {
      auto config = gossip::load_config(expect_flags.config_path);
      apply_overrides(config, expect_flags);
      config.analyses = {gossip::Analysis::exact};
      return execute(config);
    }
    if (window->parsed()) {
      auto config = gossip::load_config(window_flags.config_path);
      apply_overrides(config, window_flags);
      config.analyses = {gossip::Analysis::exact, gossip::Analysis::window};
      return execute(config);
    }
    if (bounds->parsed()) {
      auto config = gossip::load_config(bounds_flags.config_path);
      apply_overrides(config, bounds_flags);
      const bool local = config.graph.intra_weight > config.graph.inter_weight;
      config.analyses = {gossip::Analysis::exact,
                         local ? gossip::Analysis::local_bound
                               : gossip::Analysis::global_bound};
      return execute(config);
    }
    if (reproduce->parsed()) {
      auto config = gossip::preset_config(preset_name);
      apply_overrides(config, reproduce_flags);
      if (config.output_dir == "out") config.output_dir = "out/" + preset_name;
      if (reproduce_flags.out) config.output_dir = *reproduce_flags.out;
      return execute(config);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
