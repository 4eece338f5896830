#include "runs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "dgh/presets.hpp"

namespace dghcli {

namespace {

dgh::Field preset_field(const dgh::PresetSpec& spec, const dgh::Grid& grid,
                        const dgh::Parameters& params) {
  try {
    return dgh::ic_preset(spec, grid, params);
  } catch (const dgh::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

bool seed_on_density_zero(const dgh::CharacteristicPath& path, double rho_tol) {
  const auto& r = path.points.front().rho_tilde;
  return r && std::abs(*r + 1.0) <= rho_tol;
}

}  // namespace

dgh::State initial_state(const RunConfig& config) {
  const dgh::Parameters prm = config.parameters();
  const dgh::Grid grid = config.grid();
  dgh::Field u = preset_field(config.u0, grid, prm);
  if (config.equation == Equation::dgh) return dgh::State(0.0, std::move(u), std::nullopt);
  return dgh::State(0.0, std::move(u), preset_field(*config.rho0, grid, prm));
}

std::optional<dgh::CriterionVerdict> criterion_for(const RunConfig& config, const dgh::State& s0,
                                                   std::string* note) {
  const dgh::Parameters prm = config.parameters();
  if (config.equation == Equation::dgh) return dgh::check_criterion_dgh(s0.u, prm);
  if (prm.gamma() != 0.0) {
    if (note) *note = "two-component criterion requires gamma = 0";
    return std::nullopt;
  }
  return dgh::check_criterion_dgh2(s0.u, *s0.rho_tilde, prm, config.rho_tol);
}

SimulationRun run_simulation(const RunConfig& config) {
  config.validate();
  const dgh::State s0 = initial_state(config);
  SimulationRun run{config.parameters(), config.grid(), std::nullopt, {}, {}, {}, {}, {}, 0.0};
  run.verdict = criterion_for(config, s0, &run.criterion_note);

  const double root = std::sqrt(2.0 * run.params.alpha());
  run.sup_bound = dgh::h_alpha_norm(s0.u, run.params) / root;
  if (s0.rho_tilde) run.sup_bound += dgh::l2_norm(*s0.rho_tilde) / root;

  const dgh::NonlocalOperator op(run.grid, run.params);
  run.result = dgh::simulate(s0, config.solver, op);

  std::vector<double> seeds;
  if (config.seed_criterion_point && run.verdict && run.verdict->holds) {
    seeds.push_back(run.verdict->x0_best);
  }
  seeds.insert(seeds.end(), config.seeds.begin(), config.seeds.end());
  if (seeds.empty()) return run;

  run.paths = dgh::advect_many(run.result.trajectory, seeds, op);
  const double k = run.params.k();
  const double alpha = run.params.alpha();
  for (const auto& path : run.paths) {
    PathChecks c;
    c.applicable = config.equation == Equation::dgh || seed_on_density_zero(path, config.rho_tol);
    const dgh::PathPoint& p0 = path.points.front();
    c.criterion_at_seed = alpha * p0.g + std::abs(p0.u + k) < 0.0;
    if (c.applicable) {
      c.monotone = dgh::check_ab_monotone(path);
      c.signs = dgh::check_sign_persistence(path);
      c.riccati = dgh::check_riccati(path, run.params);
      if (c.criterion_at_seed) {
        c.slope = dgh::check_slope_decrease(path);
        c.h_growth = dgh::check_h_growth(path);
      }
    }
    run.checks.push_back(c);
  }
  run.ordering = dgh::check_q_ordering(run.paths);
  return run;
}

// ---------------------------------------------------------------------------
// Inequality suite

bool LemmaReport::passed() const { return violations() == 0; }

std::size_t LemmaReport::violations() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.passed ? 0 : 1;
  for (const auto& w : witnesses) n += w.passed ? 0 : 1;
  return n;
}

namespace {

void add_gap_rows(LemmaReport& report, const std::string& name, const dgh::Field& u,
                  const dgh::Field& ux, const dgh::NonlocalOperator& op, const LemmaSuiteConfig& s) {
  const double k = op.params().k();
  const std::size_t n = u.size();
  auto row = [&](const char* inequality, double gap, double x, double tol) {
    report.rows.push_back({name, inequality, n, k, gap, x, tol, gap >= -tol});
  };
  const auto [minus, plus] = dgh::convolution_gaps(u, ux, op);
  row("convolution_minus", minus.min_gap, minus.argmin_x, s.tolerance);
  row("convolution_plus", plus.min_gap, plus.argmin_x, s.tolerance);
  const dgh::GapField full = dgh::one_sided_gap(u, ux, op);
  row("convolution_full", full.min_gap, full.argmin_x, s.tolerance);
  row("sobolev", dgh::sobolev_gap(u, ux, op.params()), std::nan(""), s.sobolev_tolerance);
}

double max_abs_where(const dgh::Field& gap, bool left) {
  double worst = 0.0;
  for (std::size_t j = 0; j < gap.size(); ++j) {
    const double x = gap.grid().node(j);
    if (left ? x <= 0.0 : x >= 0.0) worst = std::max(worst, std::abs(gap[j]));
  }
  return worst;
}

}  // namespace

LemmaReport run_lemma_suite(const RunConfig& config, bool corrupt) {
  config.validate();
  const LemmaSuiteConfig& s = config.lemmas;
  const dgh::Parameters base = config.parameters();
  const dgh::Grid grid = config.grid();
  LemmaReport report;

  auto make_op = [&](const dgh::Grid& g, const dgh::Parameters& p) {
    dgh::NonlocalOperator op(g, p);
    return corrupt ? op.corrupted_for_testing() : op;
  };

  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> k_dist(-1.0, 1.0);
  for (int i = 0; i < s.random_fields; ++i) {
    const dgh::Field u = dgh::random_band_limited_field(grid, rng);
    const dgh::Parameters p = base.with_k(k_dist(rng));
    add_gap_rows(report, fmt::format("random_{:02d}", i), u, dgh::derivative(u), make_op(grid, p), s);
  }

  const dgh::NonlocalOperator op = make_op(grid, base);
  for (const char* name : {"gaussian_bump", "gaussian_derivative", "sech_bump"}) {
    const dgh::PresetSpec spec = dgh::PresetSpec::named(name);
    add_gap_rows(report, name, dgh::ic_preset(spec, grid, base),
                 dgh::ic_preset_derivative(spec, grid, base), op, s);
  }

  // Peakon witnesses: u + k = exp(-|x|/alpha) attains equality on half-lines
  // (one-sided kernels), at the peak (full kernel) and for the embedding.
  WitnessStudy minus{"convolution_minus", "x <= 0", {}, {}, {}, true};
  WitnessStudy plus{"convolution_plus", "x >= 0", {}, {}, {}, true};
  WitnessStudy full{"convolution_full", "x = 0", {}, {}, {}, true};
  WitnessStudy sob{"sobolev", "global", {}, {}, {}, true};
  for (std::size_t n : s.resolutions) {
    const dgh::Grid g(config.box_half_length(), n);
    dgh::PresetSpec spec = dgh::PresetSpec::named("peakon_shifted");
    spec.offset = base.k();
    const dgh::Field u = dgh::ic_preset(spec, g, base);
    const dgh::Field ux = dgh::ic_preset_derivative(spec, g, base);
    const dgh::NonlocalOperator pop = make_op(g, base);
    const auto [gm, gp] = dgh::convolution_gaps(u, ux, pop);
    const dgh::GapField gf = dgh::one_sided_gap(u, ux, pop);
    for (WitnessStudy* w : {&minus, &plus, &full, &sob}) w->n_points.push_back(n);
    minus.errors.push_back(max_abs_where(gm.gap, true));
    plus.errors.push_back(max_abs_where(gp.gap, false));
    full.errors.push_back(std::abs(gf.gap[g.nearest_node(0.0)]));

    spec.offset = 0.0;
    sob.errors.push_back(std::abs(dgh::sobolev_gap(dgh::ic_preset(spec, g, base),
                                                   dgh::ic_preset_derivative(spec, g, base), base)));
    for (const auto& [label, field] :
         {std::pair{"convolution_minus", &gm}, std::pair{"convolution_plus", &gp},
          std::pair{"convolution_full", &gf}}) {
      const double tol = s.peakon_tolerance;
      report.rows.push_back({fmt::format("peakon_N{}", n), label, n, base.k(), field->min_gap,
                             field->argmin_x, tol, field->min_gap >= -tol});
    }
  }
  for (WitnessStudy* w : {&minus, &plus, &full, &sob}) {
    for (std::size_t i = 1; i < w->errors.size(); ++i) {
      const double ratio = w->errors[i - 1] / w->errors[i];
      const double steps = std::log2(static_cast<double>(w->n_points[i]) /
                                     static_cast<double>(w->n_points[i - 1]));
      w->orders.push_back(std::log2(ratio) / steps);
    }
    const bool small = w->errors.back() < s.peakon_tolerance;
    const bool fast = std::all_of(w->orders.begin(), w->orders.end(),
                                  [&](double o) { return o >= s.min_order; });
    w->passed = small && fast;
    report.witnesses.push_back(*w);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepCell> sweep_cells(const RunConfig& config) {
  const SweepConfig& s = config.sweep;
  if (!s.amplitudes && !s.c0 && !s.gamma) throw ConfigError("sweep: no axes given");
  auto axis = [](const std::optional<std::vector<double>>& a, double fallback, const char* name) {
    if (!a) return std::vector<double>{fallback};
    if (a->empty()) throw ConfigError(fmt::format("sweep.{}: empty axis", name));
    return *a;
  };
  const auto amps = axis(s.amplitudes, config.u0.amplitude, "amplitude");
  const auto c0s = axis(s.c0, config.c0, "c0");
  const auto gammas = axis(s.gamma, config.gamma, "gamma");
  std::vector<SweepCell> cells;
  for (double a : amps) {
    for (double c0 : c0s) {
      for (double g : gammas) {
        if (!(g + c0 * config.alpha * config.alpha >= 0.0)) {
          throw ConfigError(fmt::format(
              "sweep cell c0={}, gamma={} lies outside gamma + c0 alpha^2 >= 0", c0, g));
        }
        cells.push_back({a, c0, g});
      }
    }
  }
  return cells;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  const std::vector<SweepCell> cells = sweep_cells(config);
  std::vector<SweepRow> rows(cells.size());

  auto run_cell = [&](std::size_t i) {
    SweepRow& row = rows[i];
    const SweepCell& cell = cells[i];
    row.cell = i;
    row.amplitude = cell.amplitude;
    row.c0 = cell.c0;
    row.gamma = cell.gamma;
    try {
      RunConfig c = config;
      c.c0 = cell.c0;
      c.gamma = cell.gamma;
      c.u0.amplitude = cell.amplitude;
      const dgh::Parameters prm = c.parameters();
      row.k = prm.k();
      row.lambda = prm.lambda();
      const dgh::State s0 = initial_state(c);
      row.verdict = criterion_for(c, s0);
      const dgh::NonlocalOperator op(c.grid(), prm);
      row.report = dgh::simulate(s0, c.solver, op).report;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.workers), cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace dghcli
