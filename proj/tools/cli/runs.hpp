#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "dgh/analysis.hpp"
#include "dgh/characteristics.hpp"
#include "dgh/evolution.hpp"

namespace dghcli {

struct PathChecks {
  bool applicable = false;         // monotone functionals apply along this seed
  bool criterion_at_seed = false;  // the blowup criterion holds at the seed itself
  dgh::PathCheck monotone;
  dgh::PathCheck signs;
  dgh::PathCheck slope;
  dgh::PathCheck riccati;
  dgh::PathCheck h_growth;
};

struct SimulationRun {
  dgh::Parameters params;
  dgh::Grid grid;
  std::optional<dgh::CriterionVerdict> verdict;
  std::string criterion_note;
  dgh::SimulationResult result;
  std::vector<dgh::CharacteristicPath> paths;
  std::vector<PathChecks> checks;
  std::optional<dgh::PathCheck> ordering;
  double sup_bound = 0.0;  // Sobolev bound on max|u| from the initial datum
};

/// Initial state for the configured equation.
dgh::State initial_state(const RunConfig& config);

/// Criterion verdict, or nullopt with a reason when it does not apply.
std::optional<dgh::CriterionVerdict> criterion_for(const RunConfig& config, const dgh::State& s0,
                                                   std::string* note = nullptr);

/// Simulation, characteristics from the configured seeds (plus the
/// criterion point), and path checks.
SimulationRun run_simulation(const RunConfig& config);

struct LemmaRow {
  std::string field;
  std::string inequality;
  std::size_t n_points = 0;
  double k = 0.0;
  double min_gap = 0.0;
  double argmin_x = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct WitnessStudy {
  std::string inequality;
  std::string region;
  std::vector<std::size_t> n_points;
  std::vector<double> errors;  // max |gap| over the equality region
  std::vector<double> orders;  // log2 ratio of consecutive errors
  bool passed = true;
};

struct LemmaReport {
  std::vector<LemmaRow> rows;
  std::vector<WitnessStudy> witnesses;
  bool passed() const;
  std::size_t violations() const;
};

/// Gap fields over seeded random fields, the smooth presets and the peakon
/// equality witnesses. `corrupt` swaps in the sign-flipped operator.
LemmaReport run_lemma_suite(const RunConfig& config, bool corrupt = false);

struct SweepRow {
  std::size_t cell = 0;
  double amplitude = 0.0;
  double c0 = 0.0;
  double gamma = 0.0;
  double k = 0.0;
  double lambda = 0.0;
  std::optional<dgh::CriterionVerdict> verdict;
  std::optional<dgh::BlowupReport> report;
  std::string error;
};

struct SweepCell {
  double amplitude, c0, gamma;
};

/// Cartesian product of the sweep axes in row-major order
/// (amplitude slowest). Throws ConfigError on empty or out-of-band axes.
std::vector<SweepCell> sweep_cells(const RunConfig& config);

/// Runs every cell on a pool of `config.workers` threads; rows come back
/// in cell order.
std::vector<SweepRow> run_sweep(const RunConfig& config);

}  // namespace dghcli
