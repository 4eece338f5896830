#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dgh/analysis.hpp"
#include "output.hpp"
#include "runs.hpp"

namespace dghcli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError(fmt::format("cannot create output directory {}", dir.string()));
  }
}

Json parameters_json(const dgh::Parameters& p) {
  return Json{{"alpha", p.alpha()}, {"gamma", p.gamma()}, {"c0", p.c0()},
              {"sigma", p.sigma()}, {"lambda", p.lambda()}, {"k", p.k()},
              {"in_band", p.in_band()}};
}

Json grid_json(const dgh::Grid& g) {
  return Json{{"L", g.half_length()}, {"N", g.size()}, {"dx", g.dx()}};
}

Json solver_json(const dgh::SolverConfig& s) {
  return Json{{"t_max", s.t_max},
              {"cfl", s.cfl},
              {"dt_min", s.dt_min},
              {"slope_blowup_threshold", s.slope_blowup_threshold},
              {"record_every", s.record_every},
              {"track_slopes", s.track_slopes}};
}

Json preset_json(const dgh::PresetSpec& s) {
  Json j{{"preset", std::string(dgh::preset_name(s.kind))}};
  if (s.kind == dgh::PresetKind::from_samples) {
    j["samples"] = s.samples.size();
    return j;
  }
  j["amplitude"] = s.amplitude;
  j["width"] = s.width;
  j["center"] = s.center;
  j["offset"] = s.offset;
  return j;
}

Json verdict_json(const std::optional<dgh::CriterionVerdict>& v) {
  if (!v) return nullptr;
  Json j{{"holds", v->holds},
         {"x0_best", number(v->x0_best)},
         {"margin", number(v->margin)},
         {"u0_at_x0", number(v->u0_at_x0)},
         {"slope_at_x0", number(v->slope_at_x0)},
         {"time_bound", optional_number(v->time_bound)}};
  j["rho_condition_met"] = v->rho_condition_met ? Json(*v->rho_condition_met) : Json(nullptr);
  return j;
}

Json report_json(const dgh::BlowupReport& r) {
  return Json{{"blew_up", r.blew_up},
              {"t_detect", optional_number(r.t_detect)},
              {"trigger", std::string(dgh::trigger_name(r.trigger))},
              {"min_slope_at_detect", number(r.min_slope_at_detect)},
              {"steps", r.steps}};
}

Json check_json(const dgh::PathCheck& c) {
  return Json{{"passed", c.passed},
              {"checked", c.checked},
              {"worst_excess", number(c.worst_excess)},
              {"at_time", optional_number(c.at_time)}};
}

Json base_json(const char* command, const RunConfig& config) {
  return Json{{"command", command},
              {"equation", equation_name(config.equation)},
              {"parameters", parameters_json(config.parameters())},
              {"grid", grid_json(config.grid())}};
}

void write_timing(const fs::path& dir, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  write_json(dir / "timing.json", Json{{"wall_time_seconds", secs}});
}

std::string show(std::optional<double> v) { return v ? fmt::format("{:.6g}", *v) : "n/a"; }

}  // namespace

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  const SimulationRun run = run_simulation(config);
  prepare_out_dir(config.out_dir);
  const fs::path& dir = config.out_dir;

  const auto& traj = run.result.trajectory;
  {
    CsvWriter csv(dir / "trajectory.csv",
                  {"t", "min_ux", "max_abs_u", "E", "F", "dt", "post_blowup"});
    for (const auto& r : traj.records()) {
      csv.cell(r.state.t).cell(r.diag.min_ux).cell(r.diag.max_abs_u).cell(r.diag.energy_E);
      csv.cell(r.diag.energy_F).cell(r.diag.dt).cell(r.post_blowup).end_row();
    }
  }

  // Drifts over pre-blowup records; F of odd data vanishes, so its drift is
  // reported in absolute terms as well.
  double max_u = 0.0, drift_e = 0.0, dev_f = 0.0;
  std::optional<double> drift_f;
  const auto pre = traj.pre_blowup();
  if (!pre.empty()) {
    const double e0 = pre.front().diag.energy_E;
    const double f0 = pre.front().diag.energy_F;
    for (const auto& r : pre) {
      max_u = std::max(max_u, r.diag.max_abs_u);
      if (e0 != 0.0) drift_e = std::max(drift_e, std::abs(r.diag.energy_E / e0 - 1.0));
      dev_f = std::max(dev_f, std::abs(r.diag.energy_F - f0));
    }
    if (std::abs(f0) > 1e-12 * std::abs(e0)) drift_f = dev_f / std::abs(f0);
  }

  Json paths = Json::array();
  for (std::size_t i = 0; i < run.paths.size(); ++i) {
    const auto& path = run.paths[i];
    const bool with_rho = !path.rho_residuals.empty();
    const std::string file = fmt::format("characteristic_{}.csv", i);
    std::vector<std::string> header{"t",   "q",   "g",   "qx",     "A_w",
                                    "B_w", "A_p", "B_p", "mom_res"};
    if (with_rho) header.emplace_back("rho_res");
    CsvWriter csv(dir / file, header);
    for (std::size_t j = 0; j < path.size(); ++j) {
      const auto& p = path.points[j];
      csv.cell(p.t).cell(p.q).cell(p.g).cell(p.q_x);
      const auto a = path.weighted[j].A.value();
      const auto b = path.weighted[j].B.value();
      csv.cell(a.value_or(INFINITY * path.weighted[j].A.sign));
      csv.cell(b.value_or(INFINITY * path.weighted[j].B.sign));
      csv.cell(path.plain[j].A).cell(path.plain[j].B).cell(path.momentum_residuals[j]);
      if (with_rho) csv.cell(path.rho_residuals[j]);
      csv.end_row();
    }
    const PathChecks& c = run.checks[i];
    Json checks = nullptr;
    if (c.applicable) {
      checks = Json{{"ab_monotone", check_json(c.monotone)},
                    {"sign_persistence", check_json(c.signs)},
                    {"riccati", check_json(c.riccati)}};
      if (c.criterion_at_seed) {
        checks["slope_decrease"] = check_json(c.slope);
        checks["h_growth"] = check_json(c.h_growth);
      }
    }
    paths.push_back(Json{{"index", i},
                         {"seed", path.seed},
                         {"file", file},
                         {"records", path.size()},
                         {"truncated", path.truncated},
                         {"warning", path.warning},
                         {"criterion_at_seed", c.criterion_at_seed},
                         {"checks", checks}});
    if (!path.warning.empty()) fmt::print(log, "warning: {}\n", path.warning);
  }

  Json summary = base_json("simulate", config);
  summary["solver"] = solver_json(config.solver);
  summary["initial"] = Json{{"u", preset_json(config.u0)},
                            {"rho_tilde", config.rho0 ? preset_json(*config.rho0) : Json(nullptr)}};
  summary["blowup"] = report_json(run.result.report);
  summary["criterion"] = verdict_json(run.verdict);
  summary["criterion_note"] = run.criterion_note;
  summary["records"] = traj.size();
  summary["sup_norm"] = Json{{"bound", number(run.sup_bound)},
                             {"max_pre_blowup", number(max_u)},
                             {"holds", max_u <= run.sup_bound + 1e-6}};
  summary["energy_drift"] =
      Json{{"E_relative", number(drift_e)}, {"F_relative", optional_number(drift_f)},
           {"F_absolute", number(dev_f)}};
  summary["characteristics"] = paths;
  summary["q_ordering"] = run.ordering ? check_json(*run.ordering) : Json(nullptr);
  summary["timing_file"] = "timing.json";
  write_json(dir / "summary.json", summary);
  write_timing(dir, start);

  const auto& rep = run.result.report;
  fmt::print(log, "{}: {} at t = {} (min slope {:.6g}, {} steps)\n",
             equation_name(config.equation), rep.blew_up ? "breaking detected" : "no breaking",
             show(rep.blew_up ? rep.t_detect : std::optional<double>(traj.back().state.t)),
             rep.min_slope_at_detect, rep.steps);
  if (run.verdict) {
    fmt::print(log, "criterion {} (margin {:.6g}, bound {})\n",
               run.verdict->holds ? "holds" : "does not hold", run.verdict->margin,
               show(run.verdict->time_bound));
  }
  fmt::print(log, "wrote {}\n", dir.string());
  return kCompleted;
}

int cmd_criterion(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.equation == Equation::dgh2 && config.gamma != 0.0) {
    throw ConfigError(
        "the two-component criterion requires gamma = 0");
  }
  const dgh::State s0 = initial_state(config);
  const auto verdict = criterion_for(config, s0);
  prepare_out_dir(config.out_dir);
  Json doc = base_json("criterion", config);
  doc["initial"] = Json{{"u", preset_json(config.u0)},
                        {"rho_tilde", config.rho0 ? preset_json(*config.rho0) : Json(nullptr)}};
  doc["criterion"] = verdict_json(verdict);
  write_json(config.out_dir / "criterion.json", doc);
  fmt::print(log, "criterion {}: x0 = {:.17g}, margin = {:.17g}, time bound = {}\n",
             verdict->holds ? "holds" : "does not hold", verdict->x0_best, verdict->margin,
             show(verdict->time_bound));
  return kCompleted;
}

int cmd_lemmas(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const LemmaReport report = run_lemma_suite(config, options.corrupt_operator);
  prepare_out_dir(config.out_dir);
  const fs::path& dir = config.out_dir;
  {
    CsvWriter csv(dir / "lemmas.csv",
                  {"field", "inequality", "N", "k", "min_gap", "argmin_x", "tolerance", "passed"});
    for (const auto& r : report.rows) {
      csv.cell(r.field).cell(r.inequality).cell(r.n_points).cell(r.k).cell(r.min_gap);
      csv.cell(std::isfinite(r.argmin_x) ? std::optional(r.argmin_x) : std::nullopt);
      csv.cell(r.tolerance).cell(r.passed).end_row();
    }
  }
  {
    CsvWriter csv(dir / "lemmas_witness.csv",
                  {"inequality", "region", "N", "max_abs_gap", "order"});
    for (const auto& w : report.witnesses) {
      for (std::size_t i = 0; i < w.errors.size(); ++i) {
        csv.cell(w.inequality).cell(w.region).cell(w.n_points[i]).cell(w.errors[i]);
        csv.cell(i > 0 ? std::optional(w.orders[i - 1]) : std::nullopt).end_row();
      }
    }
  }
  Json worst = Json::object();
  for (const auto& r : report.rows) {
    if (r.field.rfind("peakon", 0) == 0) continue;
    if (!worst.contains(r.inequality) || r.min_gap < worst[r.inequality].get<double>()) {
      worst[r.inequality] = r.min_gap;
    }
  }
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back(Json{{"inequality", w.inequality},
                             {"region", w.region},
                             {"N", w.n_points},
                             {"max_abs_gap", w.errors},
                             {"order", w.orders},
                             {"passed", w.passed}});
  }
  Json doc = base_json("lemmas", config);
  doc["seed"] = config.rng_seed;
  doc["random_fields"] = config.lemmas.random_fields;
  doc["tolerance"] = config.lemmas.tolerance;
  doc["rows"] = report.rows.size();
  doc["violations"] = report.violations();
  doc["passed"] = report.passed();
  doc["worst_min_gap"] = worst;
  doc["witnesses"] = witnesses;
  write_json(dir / "lemmas.json", doc);

  for (const auto& r : report.rows) {
    if (!r.passed) {
      fmt::print(log, "VIOLATION {} {} N={}: min gap {:.3e} at x = {:.6g}\n", r.field,
                 r.inequality, r.n_points, r.min_gap, r.argmin_x);
    }
  }
  for (const auto& w : report.witnesses) {
    fmt::print(log, "witness {:<18} {:>8}: gap {:.3e}, order {}{}\n", w.inequality, w.region,
               w.errors.back(),
               w.orders.empty() ? std::string("n/a")
                                : fmt::format("{:.2f}", *std::min_element(w.orders.begin(),
                                                                          w.orders.end())),
               w.passed ? "" : "  FAILED");
  }
  fmt::print(log, "{} gap checks, {} violations\n", report.rows.size() + report.witnesses.size(),
             report.violations());
  return report.passed() ? kCompleted : kViolation;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  config.validate();
  const std::size_t cells = sweep_cells(config).size();
  const std::vector<SweepRow> rows = run_sweep(config);
  prepare_out_dir(config.out_dir);
  CsvWriter csv(config.out_dir / "sweep.csv",
                {"cell", "amplitude", "c0", "gamma", "k", "lambda", "holds", "margin", "x0_best",
                 "time_bound", "blew_up", "t_detect", "trigger", "status", "message"});
  std::size_t blowing = 0, errors = 0;
  for (const auto& r : rows) {
    csv.cell(r.cell).cell(r.amplitude).cell(r.c0).cell(r.gamma).cell(r.k).cell(r.lambda);
    if (r.verdict) {
      csv.cell(r.verdict->holds).cell(r.verdict->margin).cell(r.verdict->x0_best);
      csv.cell(r.verdict->time_bound);
    } else {
      csv.cell(std::string_view()).cell(std::nullopt).cell(std::nullopt).cell(std::nullopt);
    }
    if (r.report) {
      csv.cell(r.report->blew_up).cell(r.report->t_detect);
      csv.cell(dgh::trigger_name(r.report->trigger));
      blowing += r.report->blew_up ? 1 : 0;
    } else {
      csv.cell(std::string_view()).cell(std::nullopt).cell(std::string_view());
    }
    csv.cell(r.error.empty() ? "ok" : "error").cell(r.error).end_row();
    errors += r.error.empty() ? 0 : 1;
  }
  Json doc = base_json("sweep", config);
  doc["solver"] = solver_json(config.solver);
  doc["initial"] = Json{{"u", preset_json(config.u0)},
                        {"rho_tilde", config.rho0 ? preset_json(*config.rho0) : Json(nullptr)}};
  doc["cells"] = cells;
  doc["blew_up"] = blowing;
  doc["errors"] = errors;
  doc["table"] = "sweep.csv";
  write_json(config.out_dir / "sweep.json", doc);
  fmt::print(log, "{} cells, {} with breaking, {} errors; wrote {}\n", cells, blowing, errors,
             (config.out_dir / "sweep.csv").string());
  return kCompleted;
}

}  // namespace dghcli
