#include "dgh/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgh/analysis.hpp"
#include "dgh/interpolation.hpp"

namespace dgh {

void SolverConfig::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidArgument("cfl must lie in (0, 1]");
  if (!(dt_min > 0.0)) throw InvalidArgument("dt_min must be positive");
  if (!(slope_blowup_threshold > 0.0)) {
    throw InvalidArgument("slope_blowup_threshold must be positive");
  }
  if (record_every == 0) throw InvalidArgument("record_every must be at least 1");
}

RightHandSide::RightHandSide(const NonlocalOperator& op) : op_(op) {}

void RightHandSide::evaluate(std::span<const double> u, std::span<const double> rho,
                             Evaluation& out) const {
  const Spectral& sp = op_.spectral();
  const Parameters& prm = op_.params();
  const std::size_t n = u.size();
  const double a2 = prm.alpha() * prm.alpha();
  const double two_k = 2.0 * prm.k();
  const double lambda = prm.lambda();
  const bool two = !rho.empty();

  const Spectrum u_hat = sp.analyse(u);
  Spectrum ux_hat = u_hat;
  sp.differentiate_in_place(ux_hat);
  out.u_x = sp.synthesise(ux_hat);

  Spectrum g_hat = sp.dealiased_product(ux_hat, ux_hat);
  const Spectrum uu_hat = sp.dealiased_product(u_hat, u_hat);
  for (std::size_t k = 0; k < g_hat.size(); ++k) {
    g_hat[k] = 0.5 * a2 * g_hat[k] + uu_hat[k] + two_k * u_hat[k];
  }

  Spectrum rho_hat;
  if (two) {
    rho_hat = sp.analyse(rho);
    const Spectrum rr_hat = sp.dealiased_product(rho_hat, rho_hat);
    const double sigma = prm.sigma();
    for (std::size_t k = 0; k < g_hat.size(); ++k) {
      g_hat[k] += sigma * (0.5 * rr_hat[k] + rho_hat[k]);
    }
  }

  Spectrum p_hat = g_hat;
  op_.apply_Q_in_place(p_hat);
  out.nonlocal = sp.synthesise(p_hat);
  op_.apply_dQ_in_place(g_hat);
  const std::vector<double> dp = sp.synthesise(g_hat);

  const std::vector<double> uux = sp.synthesise(sp.dealiased_product(u_hat, ux_hat));
  out.u_t.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.u_t[j] = -uux[j] - lambda * out.u_x[j] - dp[j];

  if (two) {
    sp.differentiate_in_place(rho_hat);
    const std::vector<double> rho_x = sp.synthesise(rho_hat);
    out.rho_t.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      out.rho_t[j] = -u[j] * rho_x[j] - out.u_x[j] * (rho[j] + 1.0);
    }
  } else {
    out.rho_t.clear();
  }
}

Field dgh_rhs(const Field& u, const NonlocalOperator& op) {
  RightHandSide rhs(op);
  RightHandSide::Evaluation ev;
  rhs.evaluate(u.values(), {}, ev);
  return Field(u.grid(), std::move(ev.u_t));
}

std::pair<Field, Field> dgh2_rhs(const State& state, const NonlocalOperator& op) {
  if (!state.rho_tilde) throw InvalidArgument("dgh2_rhs needs rho_tilde");
  RightHandSide rhs(op);
  RightHandSide::Evaluation ev;
  rhs.evaluate(state.u.values(), state.rho_tilde->values(), ev);
  return {Field(state.grid(), std::move(ev.u_t)), Field(state.grid(), std::move(ev.rho_t))};
}

namespace {

constexpr double kSpeedFloor = 1e-12;

// Flat state vector: u, then rho~ (optional), then marker positions and
// marker slopes (optional).
struct Layout {
  std::size_t n = 0;
  bool two = false;
  bool markers = false;

  std::size_t size() const noexcept { return n * (1 + (two ? 1 : 0) + (markers ? 2 : 0)); }
  std::size_t rho() const noexcept { return n; }
  std::size_t q() const noexcept { return n * (two ? 2 : 1); }
  std::size_t g() const noexcept { return q() + n; }
};

class Integrator {
 public:
  Integrator(const NonlocalOperator& op, Layout layout)
      : op_(op), rhs_(op), layout_(layout), interp_(op.grid()) {}

  // Time derivative of the flat state. Also leaves the grid slopes of the
  // evaluated state in last_ux_.
  void derivative(std::span<const double> y, std::span<double> dy) {
    const std::size_t n = layout_.n;
    std::span<const double> u = y.subspan(0, n);
    std::span<const double> rho = layout_.two ? y.subspan(layout_.rho(), n) : std::span<const double>{};
    rhs_.evaluate(u, rho, ev_);
    std::copy(ev_.u_t.begin(), ev_.u_t.end(), dy.begin());
    if (layout_.two) std::copy(ev_.rho_t.begin(), ev_.rho_t.end(), dy.begin() + layout_.rho());
    if (!layout_.markers) return;

    const Parameters& prm = op_.params();
    const double inv_a2 = 1.0 / (prm.alpha() * prm.alpha());
    const double two_k = 2.0 * prm.k();
    const double sigma = prm.sigma();
    for (std::size_t i = 0; i < n; ++i) {
      const double q = y[layout_.q() + i];
      const double g = y[layout_.g() + i];
      const auto st = interp_.stencil(q);
      const double uq = LocalInterpolator::apply(st, u);
      const double pq = LocalInterpolator::apply(st, ev_.nonlocal);
      double local = uq * uq + two_k * uq;
      if (layout_.two) {
        const double rq = LocalInterpolator::apply(st, rho);
        local += sigma * (0.5 * rq * rq + rq);
      }
      dy[layout_.q() + i] = uq + prm.lambda();
      dy[layout_.g() + i] = -0.5 * g * g + (local - pq) * inv_a2;
    }
  }

  void step(std::vector<double>& y, double dt) {
    const std::size_t m = y.size();
    k1_.resize(m);
    k2_.resize(m);
    k3_.resize(m);
    k4_.resize(m);
    tmp_.resize(m);
    derivative(y, k1_);
    for (std::size_t i = 0; i < m; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    derivative(tmp_, k2_);
    for (std::size_t i = 0; i < m; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    derivative(tmp_, k3_);
    for (std::size_t i = 0; i < m; ++i) tmp_[i] = y[i] + dt * k3_[i];
    derivative(tmp_, k4_);
    for (std::size_t i = 0; i < m; ++i) {
      y[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    if (!all_finite(y)) throw NumericalBreakdown("non-finite value during RK4 step");
  }

 private:
  const NonlocalOperator& op_;
  RightHandSide rhs_;
  Layout layout_;
  LocalInterpolator interp_;
  RightHandSide::Evaluation ev_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

std::vector<double> pack(const State& s, const Layout& layout) {
  std::vector<double> y(layout.size());
  std::copy(s.u.values().begin(), s.u.values().end(), y.begin());
  if (layout.two) {
    std::copy(s.rho_tilde->values().begin(), s.rho_tilde->values().end(), y.begin() + layout.rho());
  }
  return y;
}

State unpack(const std::vector<double>& y, const Layout& layout, const Grid& grid, double t) {
  std::vector<double> u(y.begin(), y.begin() + layout.n);
  std::optional<Field> rho;
  if (layout.two) {
    rho = Field(grid, std::vector<double>(y.begin() + layout.rho(), y.begin() + layout.rho() + layout.n));
  }
  return State(t, Field(grid, std::move(u)), std::move(rho));
}

Diagnostics diagnose(const State& s, const Spectral& sp, const Parameters& prm,
                     std::span<const double> marker_slopes, double dt) {
  Diagnostics d;
  const std::vector<double> ux = sp.derivative(s.u.values());
  d.min_ux_grid = *std::min_element(ux.begin(), ux.end());
  d.min_ux = d.min_ux_grid;
  if (!marker_slopes.empty()) {
    d.min_ux = std::min(d.min_ux, *std::min_element(marker_slopes.begin(), marker_slopes.end()));
  }
  d.max_abs_u = s.u.max_abs();
  d.dt = dt;
  d.energy_E = energy_E(s, prm);
  d.energy_F = energy_F(s, prm);
  return d;
}

double max_abs_slope(const std::vector<double>& ux, std::span<const double> marker_slopes) {
  double m = 0.0;
  for (double v : ux) m = std::max(m, std::abs(v));
  for (double v : marker_slopes) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

State step_rk4(const State& state, double dt, const NonlocalOperator& op) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  Layout layout{state.u.size(), state.two_component(), false};
  Integrator integ(op, layout);
  std::vector<double> y = pack(state, layout);
  integ.step(y, dt);
  return unpack(y, layout, state.grid(), state.t + dt);
}

double adaptive_dt(const State& state, const SolverConfig& config, const Parameters& params,
                   double max_slope) {
  const double speed = std::max(state.u.max_abs() + std::abs(params.lambda()), kSpeedFloor);
  double dt = config.cfl * state.grid().dx() / speed;
  if (max_slope > 0.0) dt = std::min(dt, config.cfl / max_slope);
  const double remaining = config.t_max - state.t;
  return std::max(0.0, std::min(dt, remaining));
}

void Trajectory::push(Record r) {
  if (!records_.empty() && !(r.state.t > records_.back().state.t)) {
    throw InvalidArgument("trajectory times must increase strictly");
  }
  records_.push_back(std::move(r));
}

void Trajectory::mark_back_post_blowup() {
  if (!records_.empty()) records_.back().post_blowup = true;
}

std::span<const Record> Trajectory::pre_blowup() const noexcept {
  std::size_t n = records_.size();
  while (n > 0 && records_[n - 1].post_blowup) --n;
  return std::span<const Record>(records_.data(), n);
}

std::string_view trigger_name(Trigger t) noexcept {
  switch (t) {
    case Trigger::slope_threshold: return "slope_threshold";
    case Trigger::dt_underflow: return "dt_underflow";
    case Trigger::horizon_reached: return "horizon_reached";
  }
  return "unknown";
}

SimulationResult simulate(const State& initial, const SolverConfig& config,
                          const NonlocalOperator& op) {
  config.validate();
  if (!(initial.grid() == op.grid())) throw InvalidArgument("initial state and operator grids differ");
  if (!all_finite(initial.u.values()) ||
      (initial.rho_tilde && !all_finite(initial.rho_tilde->values()))) {
    throw InvalidArgument("initial datum must be finite");
  }

  const Grid& grid = initial.grid();
  const Parameters& prm = op.params();
  const Spectral& sp = op.spectral();
  Layout layout{grid.size(), initial.two_component(), config.track_slopes};
  Integrator integ(op, layout);

  std::vector<double> y = pack(initial, layout);
  if (layout.markers) {
    const std::vector<double> ux0 = sp.derivative(initial.u.values());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      y[layout.q() + j] = grid.node(j);
      y[layout.g() + j] = ux0[j];
    }
  }
  auto marker_slopes = [&](const std::vector<double>& v) -> std::span<const double> {
    if (!layout.markers) return {};
    return std::span<const double>(v.data() + layout.g(), layout.n);
  };

  SimulationResult result;
  BlowupReport& report = result.report;
  State state = initial;
  Diagnostics diag = diagnose(state, sp, prm, marker_slopes(y), 0.0);

  auto detect = [&](const Diagnostics& d) { return d.min_ux < -config.slope_blowup_threshold; };

  if (detect(diag)) {
    result.trajectory.push({state, diag, true});
    report.blew_up = true;
    report.t_detect = state.t;
    report.trigger = Trigger::slope_threshold;
    report.min_slope_at_detect = diag.min_ux;
    return result;
  }
  result.trajectory.push({state, diag, false});
  bool last_recorded = true;

  const double horizon_eps = 1e-12 * std::max(1.0, config.t_max);
  std::size_t steps = 0;
  while (config.t_max - state.t > horizon_eps) {
    const std::vector<double> ux = sp.derivative(state.u.values());
    const double slope_scale = max_abs_slope(ux, marker_slopes(y));
    SolverConfig unlimited = config;
    unlimited.t_max = std::numeric_limits<double>::infinity();
    const double dt_free = adaptive_dt(state, unlimited, prm, slope_scale);
    if (dt_free < config.dt_min) {
      if (!last_recorded) result.trajectory.push({state, diag, true});
      else result.trajectory.mark_back_post_blowup();
      report.blew_up = true;
      report.t_detect = state.t;
      report.trigger = Trigger::dt_underflow;
      report.min_slope_at_detect = diag.min_ux;
      report.steps = steps;
      return result;
    }
    double dt = std::min(dt_free, config.t_max - state.t);
    const bool final_step = config.t_max - state.t - dt <= horizon_eps;

    std::vector<double> next = y;
    try {
      integ.step(next, dt);
    } catch (const NumericalBreakdown&) {
      // Keep the last finite state as the final record.
      if (!last_recorded) result.trajectory.push({state, diag, true});
      else result.trajectory.mark_back_post_blowup();
      report.blew_up = true;
      report.t_detect = state.t;
      report.trigger = Trigger::dt_underflow;
      report.min_slope_at_detect = diag.min_ux;
      report.steps = steps;
      return result;
    }
    y = std::move(next);
    ++steps;
    const double t_new = final_step ? config.t_max : state.t + dt;
    state = unpack(y, layout, grid, t_new);
    diag = diagnose(state, sp, prm, marker_slopes(y), dt);

    if (detect(diag)) {
      result.trajectory.push({state, diag, true});
      report.blew_up = true;
      report.t_detect = state.t;
      report.trigger = Trigger::slope_threshold;
      report.min_slope_at_detect = diag.min_ux;
      report.steps = steps;
      return result;
    }
    last_recorded = steps % config.record_every == 0 || final_step;
    if (last_recorded) result.trajectory.push({state, diag, false});
  }
  if (!last_recorded) result.trajectory.push({state, diag, false});
  report.blew_up = false;
  report.trigger = Trigger::horizon_reached;
  report.min_slope_at_detect = diag.min_ux;
  report.steps = steps;
  return result;
}

}  // namespace dgh
