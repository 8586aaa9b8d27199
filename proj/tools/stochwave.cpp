// stochwave: blow-up criteria and Monte Carlo runs for the damped stochastic
// wave equation on a box with Dirichlet data.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stochwave/commands.hpp"
#include "stochwave/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic wave equation simulator and blow-up criteria checker", "stochwave"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override a key, section.key=value (repeatable)")->take_all();
    sub->add_option("--seed", seed, "seed (simulate) or master seed (ensemble)");
    sub->add_option("--out", out_dir, "output directory");
  };
  CLI::App* check = app.add_subcommand("check", "evaluate the blow-up conditions");
  CLI::App* simulate = app.add_subcommand("simulate", "integrate one sample path");
  CLI::App* ensemble = app.add_subcommand("ensemble", "Monte Carlo ensemble and explosion summary");
  CLI::App* reproduce = app.add_subcommand("reproduce-example", "closed forms of the half-plane example");
  for (CLI::App* sub : {check, simulate, ensemble, reproduce}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? stochwave::kExitOk : stochwave::kExitError;
  }

  try {
    stochwave::Config cfg = stochwave::load_config(config_path, overrides);
    if (out_dir) cfg.output_dir = *out_dir;
    if (seed) cfg.mc.master_seed = *seed;
    if (check->parsed()) return stochwave::cmd_check(cfg, std::cout);
    if (simulate->parsed()) return stochwave::cmd_simulate(cfg, seed, std::cout);
    if (ensemble->parsed()) return stochwave::cmd_ensemble(cfg, std::cout);
    return stochwave::cmd_reproduce_example(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "stochwave: " << e.what() << '\n';
    return stochwave::kExitError;
  }
}
