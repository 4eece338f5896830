#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgh/evolution.hpp"
#include "dgh/parameters.hpp"
#include "dgh/presets.hpp"

namespace dghcli {

/// Bad flags, unreadable or inconsistent configuration. Maps to exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Equation { dgh, dgh2 };

struct LemmaSuiteConfig {
  int random_fields = 50;
  std::vector<std::size_t> resolutions{1024, 2048, 4096};
  double tolerance = 1e-8;
  double sobolev_tolerance = 1e-9;
  double peakon_tolerance = 1e-3;
  double min_order = 1.5;
};

struct SweepConfig {
  std::optional<std::vector<double>> amplitudes;
  std::optional<std::vector<double>> c0;
  std::optional<std::vector<double>> gamma;
};

struct RunConfig {
  Equation equation = Equation::dgh;
  double alpha = 1.0;
  double gamma = 0.0;
  double c0 = 0.0;
  double sigma = 1.0;
  std::optional<double> half_length;  // defaults to 20 alpha
  std::size_t n_points = 4096;
  dgh::SolverConfig solver;
  dgh::PresetSpec u0 = dgh::PresetSpec::named("gaussian_derivative");
  std::optional<dgh::PresetSpec> rho0;
  std::vector<double> seeds;
  bool seed_criterion_point = true;
  double rho_tol = 1e-10;
  LemmaSuiteConfig lemmas;
  SweepConfig sweep;
  std::uint64_t rng_seed = 20240531;
  int workers = 1;
  std::filesystem::path out_dir = "out";

  dgh::Parameters parameters() const;
  dgh::Grid grid() const;
  double box_half_length() const { return half_length.value_or(20.0 * alpha); }

  /// Cross-field checks; throws ConfigError.
  void validate() const;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> alpha, gamma, c0, half_length, t_max, cfl;
  std::optional<std::size_t> n_points;
};

/// Reads a YAML file; an absent path yields the defaults.
RunConfig load_config(const std::optional<std::filesystem::path>& path);
void apply_overrides(RunConfig& config, const Overrides& overrides);

const char* equation_name(Equation e) noexcept;

}  // namespace dghcli
