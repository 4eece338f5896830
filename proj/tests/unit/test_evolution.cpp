#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>

#include "dgh/analysis.hpp"
#include "dgh/evolution.hpp"
#include "dgh/fourier.hpp"
#include "dgh/presets.hpp"
#include "support.hpp"

using namespace dgh;
using dgh::testing::max_abs_diff;
using dgh::testing::sample;

namespace {

Field preset(const char* name, double amplitude, const Grid& g, const Parameters& p) {
  return ic_preset(PresetSpec::named(name, amplitude), g, p);
}

Field times(const Field& a, const Field& b) {
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] * b[j];
  return Field(a.grid(), std::move(v));
}

SimulationResult run(const State& s0, const NonlocalOperator& op, double t_max) {
  SolverConfig cfg;
  cfg.t_max = t_max;
  return simulate(s0, cfg, op);
}

double relative_drift(std::span<const Record> records, double (*fn)(const State&, const Parameters&),
                      const Parameters& p, double min_ux_floor) {
  const double f0 = fn(records.front().state, p);
  double worst = 0.0;
  for (const Record& r : records) {
    if (r.diag.min_ux < min_ux_floor) break;
    worst = std::max(worst, std::abs(fn(r.state, p) - f0) / std::abs(f0));
  }
  return worst;
}

std::string fmt_drift(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", d);
  return buf;
}

}  // namespace

TEST(DghRhs, ZeroAndConstant) {
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  EXPECT_EQ(dgh_rhs(Field::zeros(g), op).max_abs(), 0.0);
  EXPECT_LT(dgh_rhs(Field::constant(g, 1.5), op).max_abs(), 1e-13);
}

TEST(DghRhs, MatchesMomentumForm) {
  const Grid g(20.0, 1024);
  for (auto [a, gamma, c0] : {std::tuple{1.0, 0.0, 0.0}, std::tuple{1.0, 1.0, 1.0},
                              std::tuple{0.7, 0.3, -0.2}, std::tuple{1.5, -0.4, 2.0}}) {
    const auto p = Parameters::make(a, gamma, c0);
    const NonlocalOperator op(g, p);
    const Field u = preset("gaussian_bump", 1.0, g, p);
    const Field ux = derivative(u);
    const Field m = u - (a * a) * derivative(u, 2);
    const Field mt = (-c0) * ux - times(u, derivative(m)) - 2.0 * times(m, ux) -
                     gamma * derivative(u, 3);
    EXPECT_LT(max_abs_diff(dgh_rhs(u, op), op.apply_Q(mt)), 1e-8) << a << " " << gamma << " " << c0;
  }
}

TEST(Dgh2Rhs, Examples) {
  const Grid g(20.0, 512);
  const auto p = Parameters::make(1.0, 0.0, 0.4);
  const NonlocalOperator op(g, p);

  auto [ut0, rt0] = dgh2_rhs(State(0.0, Field::zeros(g), Field::zeros(g)), op);
  EXPECT_EQ(ut0.max_abs(), 0.0);
  EXPECT_EQ(rt0.max_abs(), 0.0);

  const Field rho = preset("gaussian_bump", 1.0, g, p);
  auto [ut1, rt1] = dgh2_rhs(State(0.0, Field::zeros(g), rho), op);
  const Field source = 0.5 * times(rho, rho) + rho;
  EXPECT_LT(max_abs_diff(ut1, -1.0 * op.apply_dQ(source)), 1e-12);
  EXPECT_EQ(rt1.max_abs(), 0.0);

  const Field u = preset("gaussian_derivative", 1.0, g, p);
  auto [ut2, rt2] = dgh2_rhs(State(0.0, u, Field::constant(g, -1.0)), op);
  EXPECT_LT(rt2.max_abs(), 1e-14);

  EXPECT_THROW(dgh2_rhs(State(0.0, u), op), InvalidArgument);
}

TEST(Dgh2Rhs, ReducesToDghWithoutDensity) {
  const Grid g(20.0, 512);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const Field u = preset("gaussian_derivative", 1.0, g, p);
  EXPECT_LT(max_abs_diff(dgh2_rhs(State(0.0, u, Field::zeros(g)), op).first, dgh_rhs(u, op)),
            1e-14);
}

TEST(StepRk4, ZeroIsFixedPoint) {
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  const State s = step_rk4(State(0.0, Field::zeros(g)), 0.7, op);
  EXPECT_EQ(s.u.max_abs(), 0.0);
  EXPECT_DOUBLE_EQ(s.t, 0.7);
}

TEST(StepRk4, FourthOrderSelfConvergence) {
  const Grid g(20.0, 256);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const State s0(0.0, preset("gaussian_bump", 1.0, g, p));
  auto integrate = [&](double dt) {
    State s = s0;
    const int steps = static_cast<int>(std::lround(0.4 / dt));
    for (int i = 0; i < steps; ++i) s = step_rk4(s, dt, op);
    return s.u;
  };
  const Field u1 = integrate(0.02), u2 = integrate(0.01), u3 = integrate(0.005);
  const double ratio = max_abs_diff(u1, u2) / max_abs_diff(u2, u3);
  EXPECT_NEAR(ratio, 16.0, 2.5);
}

TEST(StepRk4, LinearDispersionRelation) {
  const double L = 20.0, eps = 1e-8, T = 2.0;
  const Grid g(L, 256);
  const auto p = Parameters::make(1.0, 0.0, 1.0);
  const NonlocalOperator op(g, p);
  const Spectral& sp = op.spectral();
  for (std::size_t mode : {1, 3, 8, 20}) {
    const double xi = sp.wavenumbers()[mode];
    State s(0.0, sample(g, [&](double x) { return eps * std::cos(xi * (x + L)); }));
    const double dt = 0.01;
    for (int i = 0; i < static_cast<int>(T / dt); ++i) s = step_rk4(s, dt, op);
    const Spectrum c = sp.analyse(s.u.values());
    const double phase = -std::arg(c[mode]);
    const double speed = phase / (xi * T);
    const double expected = p.c0() / (1.0 + xi * xi);
    EXPECT_NEAR(speed, expected, 1e-3 * expected) << mode;
  }
}

TEST(StepRk4, NonFiniteStageThrows) {
  const Grid g(20.0, 256);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const State s(0.0, preset("gaussian_derivative", 1e200, g, p));
  EXPECT_THROW(step_rk4(s, 0.1, op), NumericalBreakdown);
}

TEST(AdaptiveDt, Formula) {
  const Grid g(20.0, 256);
  const auto p0 = Parameters::make(1.0, 0.0, 0.0);
  SolverConfig cfg;
  cfg.t_max = 3.0;
  EXPECT_DOUBLE_EQ(adaptive_dt(State(1.0, Field::zeros(g)), cfg, p0), 2.0);

  const double d1 = adaptive_dt(State(0.0, Field::constant(g, 0.5)), cfg, p0);
  const double d2 = adaptive_dt(State(0.0, Field::constant(g, 1.0)), cfg, p0);
  EXPECT_DOUBLE_EQ(d1, cfg.cfl * g.dx() / 0.5);
  EXPECT_DOUBLE_EQ(d2, 0.5 * d1);

  // lambda = -1 adds to the transport speed.
  const auto p1 = Parameters::make(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(adaptive_dt(State(0.0, Field::constant(g, 1.0)), cfg, p1), 0.5 * d2);
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.cfl = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.cfl = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = SolverConfig{};
  cfg.dt_min = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = SolverConfig{};
  cfg.slope_blowup_threshold = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Simulate, ZeroDatumStaysZero) {
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  const auto res = run(State(0.0, Field::zeros(g)), op, 1.0);
  EXPECT_FALSE(res.report.blew_up);
  EXPECT_EQ(res.report.trigger, Trigger::horizon_reached);
  EXPECT_DOUBLE_EQ(res.trajectory.back().state.t, 1.0);
  for (const Record& r : res.trajectory.records()) EXPECT_EQ(r.state.u.max_abs(), 0.0);
}

TEST(Simulate, TrajectoryInvariants) {
  const Grid g(20.0, 512);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  SolverConfig cfg;
  cfg.t_max = 0.5;
  cfg.record_every = 7;
  const Field u0 = preset("gaussian_bump", 1.0, g, p);
  const auto res = simulate(State(0.0, u0), cfg, op);
  const auto& recs = res.trajectory.records();
  ASSERT_GE(recs.size(), 2u);
  EXPECT_EQ(recs.front().state.t, 0.0);
  EXPECT_EQ(max_abs_diff(recs.front().state.u, u0), 0.0);
  for (std::size_t i = 1; i < recs.size(); ++i) EXPECT_GT(recs[i].state.t, recs[i - 1].state.t);
  EXPECT_DOUBLE_EQ(recs.back().state.t, 0.5);
  EXPECT_EQ(res.report.blew_up, res.report.trigger != Trigger::horizon_reached);
}

TEST(Simulate, GaussianDerivativeBreaksBeforeBound) {
  const Grid g(20.0, 4096);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const auto res = run(State(0.0, preset("gaussian_derivative", 1.0, g, p)), op, 3.0);
  ASSERT_TRUE(res.report.blew_up);
  EXPECT_EQ(res.report.trigger, Trigger::slope_threshold);
  ASSERT_TRUE(res.report.t_detect.has_value());
  EXPECT_LT(*res.report.t_detect, 2.0);
  EXPECT_LT(res.report.min_slope_at_detect, -1e4);
  EXPECT_TRUE(res.trajectory.back().post_blowup);
  for (const Record& r : res.trajectory.pre_blowup()) EXPECT_FALSE(r.post_blowup);
}

TEST(Simulate, DetectionTimeIsResolutionRobust) {
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  double t[2];
  int i = 0;
  for (std::size_t n : {2048, 4096}) {
    const Grid g(20.0, n);
    const NonlocalOperator op(g, p);
    const auto res = run(State(0.0, preset("gaussian_derivative", 1.0, g, p)), op, 3.0);
    ASSERT_TRUE(res.report.t_detect.has_value());
    t[i++] = *res.report.t_detect;
  }
  EXPECT_LT(std::abs(t[0] - t[1]) / t[1], 0.02);
}

TEST(Simulate, DetectionInsensitiveToThreshold) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  SolverConfig cfg;
  cfg.t_max = 3.0;
  const State s0(0.0, preset("gaussian_derivative", 1.0, g, p));
  const double t1 = *simulate(s0, cfg, op).report.t_detect;
  cfg.slope_blowup_threshold = 2e4;
  const double t2 = *simulate(s0, cfg, op).report.t_detect;
  EXPECT_LT(std::abs(t2 - t1) / t1, 0.01);
}

TEST(Simulate, StepShrinksWhileBreaking) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const auto res = run(State(0.0, preset("gaussian_derivative", 1.0, g, p)), op, 3.0);
  const auto& recs = res.trajectory.records();
  double prev = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i - 1].diag.min_ux >= -100.0) continue;
    if (prev > 0.0) {
      EXPECT_LE(recs[i].diag.dt, prev * (1 + 1e-12)) << recs[i].state.t;
      ++checked;
    }
    prev = recs[i].diag.dt;
  }
  EXPECT_GT(checked, 10u);
}

TEST(Simulate, SmallDatumStaysSmooth) {
  const Grid g(20.0, 4096);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const auto res = run(State(0.0, preset("gaussian_bump", 0.01, g, p)), op, 5.0);
  EXPECT_EQ(res.report.trigger, Trigger::horizon_reached);
  for (const Record& r : res.trajectory.records()) EXPECT_GE(r.diag.min_ux, -0.1);
}

TEST(Simulate, NonFiniteIsReportedAsUnderflow) {
  const Grid g(20.0, 256);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  SolverConfig cfg;
  cfg.t_max = 1.0;
  cfg.dt_min = 1e-300;
  cfg.slope_blowup_threshold = 1e300;
  const auto res = simulate(State(0.0, preset("gaussian_bump", 1e160, g, p)), cfg, op);
  EXPECT_TRUE(res.report.blew_up);
  EXPECT_EQ(res.report.trigger, Trigger::dt_underflow);
  EXPECT_TRUE(all_finite(res.trajectory.back().state.u.values()));
}

TEST(Simulate, LargeDtMinUnderflows) {
  const Grid g(20.0, 256);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  SolverConfig cfg;
  cfg.t_max = 1.0;
  cfg.dt_min = 0.5;
  const auto res = simulate(State(0.0, preset("gaussian_bump", 1.0, g, p)), cfg, op);
  EXPECT_TRUE(res.report.blew_up);
  EXPECT_EQ(res.report.trigger, Trigger::dt_underflow);
  EXPECT_TRUE(res.report.t_detect.has_value());
}

TEST(Conservation, EnergyOnSmoothInterval) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  for (auto [name, amp, tmax] : {std::tuple{"gaussian_derivative", 1.0, 3.0},
                                 std::tuple{"gaussian_bump", 1.0, 1.0},
                                 std::tuple{"sech_bump", 1.0, 1.0}}) {
    const auto res = run(State(0.0, preset(name, amp, g, p)), op, tmax);
    EXPECT_LT(relative_drift(res.trajectory.pre_blowup(), energy_E, p, -10.0), 1e-6) << name;
  }
}

TEST(Conservation, EnergyWithDispersion) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 1.0, 1.0);
  const NonlocalOperator op(g, p);
  const auto res = run(State(0.0, preset("gaussian_bump", 1.0, g, p)), op, 1.0);
  EXPECT_LT(relative_drift(res.trajectory.pre_blowup(), energy_E, p, -10.0), 1e-6);
}

TEST(Conservation, SecondInvariant) {
  const Grid g(20.0, 2048);
  for (const auto& p : {Parameters::make(1.0, 0.0, 0.0), Parameters::make(1.0, 1.0, 1.0)}) {
    const NonlocalOperator op(g, p);
    const auto res = run(State(0.0, preset("gaussian_bump", 1.0, g, p)), op, 1.0);
    EXPECT_GT(std::abs(energy_F(res.trajectory.front().state, p)), 0.1);
    EXPECT_LT(relative_drift(res.trajectory.pre_blowup(), energy_F, p, -10.0), 1e-5)
        << describe(p);
  }
}

TEST(Conservation, SupNormBound) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const Field u0 = preset("gaussian_derivative", 1.0, g, p);
  const double bound = h_alpha_norm(u0, p) / std::sqrt(2.0 * p.alpha()) + 1e-6;
  const auto res = run(State(0.0, u0), op, 3.0);
  for (const Record& r : res.trajectory.pre_blowup()) EXPECT_LE(r.diag.max_abs_u, bound);
}

TEST(TwoComponent, DensityDeficitStaysPut) {
  const Grid g(20.0, 1024);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const auto res = run(State(0.0, preset("gaussian_derivative", 0.5, g, p), Field::constant(g, -1.0)),
                       op, 0.5);
  for (const Record& r : res.trajectory.records()) {
    EXPECT_LT(max_abs_diff(*r.state.rho_tilde, Field::constant(g, -1.0)), 1e-12);
  }
}

TEST(TwoComponent, EnergyOnSmoothInterval) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  const auto res = run(State(0.0, preset("gaussian_bump", 0.5, g, p),
                             preset("gaussian_bump", 0.3, g, p)),
                       op, 1.0);
  const double drift = relative_drift(res.trajectory.pre_blowup(), energy_E, p, -10.0);
  EXPECT_LT(drift, 1e-6);
}

TEST(TwoComponent, EnergyDriftOnBreakingRunIsReported) {
  const Grid g(20.0, 2048);
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const NonlocalOperator op(g, p);
  PresetSpec rho = PresetSpec::named("gaussian_bump", -1.0);
  rho.width = std::sqrt(0.5);
  const auto res = run(State(0.0, preset("gaussian_derivative", 1.0, g, p), ic_preset(rho, g, p)),
                       op, 2.0);
  // Reported rather than asserted: rho~ is transported in collocation form
  // so that rho~ = -1 is preserved exactly, and once the density steepens
  // below the grid scale the two-component energy is no longer conserved.
  const double drift = relative_drift(res.trajectory.pre_blowup(), energy_E, p, -10.0);
  RecordProperty("E_relative_drift", fmt_drift(drift));
  EXPECT_TRUE(std::isfinite(drift));
  EXPECT_TRUE(res.report.blew_up);
}
