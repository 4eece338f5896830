#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "dgh/parameters.hpp"

namespace {

struct Flags {
  std::string config_path;
  dghcli::Overrides overrides;
  bool corrupt = false;
};

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config_path, "YAML configuration file");
  sub.add_option("--out", f.overrides.out, "output directory");
  sub.add_option("--seed", f.overrides.seed, "RNG seed for randomized suites");
  sub.add_option("--workers", f.overrides.workers, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  sub.add_option("--alpha", f.overrides.alpha, "length scale alpha > 0");
  sub.add_option("--gamma", f.overrides.gamma, "dispersion coefficient gamma");
  sub.add_option("--c0", f.overrides.c0, "linear wave speed c0");
  sub.add_option("--L", f.overrides.half_length, "box half-length (domain [-L, L))");
  sub.add_option("--N", f.overrides.n_points, "number of grid points (even, >= 16)");
  sub.add_option("--tmax", f.overrides.t_max, "time horizon");
  sub.add_option("--cfl", f.overrides.cfl, "Courant factor in (0, 1]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification laboratory for the DGH equation"};
  app.require_subcommand(1);
  Flags flags;
  auto* simulate = app.add_subcommand("simulate", "integrate an initial datum and track characteristics");
  auto* criterion = app.add_subcommand("criterion", "evaluate the local blowup criterion");
  auto* lemmas = app.add_subcommand("lemmas", "run the convolution and embedding inequality suite");
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  for (auto* sub : {simulate, criterion, lemmas, sweep}) add_common(*sub, flags);
  lemmas->add_flag("--corrupt-operator", flags.corrupt, "negative control")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dghcli::kUsageError;
  }

  try {
    std::optional<std::filesystem::path> path;
    if (!flags.config_path.empty()) path = flags.config_path;
    dghcli::RunConfig config = dghcli::load_config(path);
    dghcli::apply_overrides(config, flags.overrides);
    if (simulate->parsed()) return dghcli::cmd_simulate(config, std::cout);
    if (criterion->parsed()) return dghcli::cmd_criterion(config, std::cout);
    if (lemmas->parsed()) return dghcli::cmd_lemmas(config, {flags.corrupt}, std::cout);
    return dghcli::cmd_sweep(config, std::cout);
  } catch (const dghcli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dghcli::kUsageError;
  } catch (const dgh::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dghcli::kUsageError;
  }
}
