#include "dgh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dgh/fourier.hpp"

namespace dgh {

// ---------------------------------------------------------------------------
// Functionals

double energy_E(const State& state, const Parameters& params) {
  const Field ux = derivative(state.u);
  const double a2 = params.alpha() * params.alpha();
  double acc = 0.0;
  for (std::size_t j = 0; j < ux.size(); ++j) {
    acc += state.u[j] * state.u[j] + a2 * ux[j] * ux[j];
  }
  if (state.rho_tilde) {
    for (double r : state.rho_tilde->values()) acc += r * r;
  }
  return 0.5 * acc * state.grid().dx();
}

double energy_F(const State& state, const Parameters& params) {
  const Spectral sp(state.grid());
  constexpr std::size_t kFactor = 2;
  const Spectrum u_hat = sp.analyse(state.u.values());
  Spectrum ux_hat = u_hat;
  sp.differentiate_in_place(ux_hat);
  const std::vector<double> u = sp.upsample(u_hat, kFactor);
  const std::vector<double> ux = sp.upsample(ux_hat, kFactor);
  std::vector<double> rho;
  if (state.rho_tilde) rho = sp.upsample(sp.analyse(state.rho_tilde->values()), kFactor);

  const double a2 = params.alpha() * params.alpha();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double v = u[j];
    const double s = ux[j];
    acc += v * v * v + a2 * v * s * s + params.c0() * v * v - params.gamma() * s * s;
    if (!rho.empty()) acc += 2.0 * v * rho[j] + v * rho[j] * rho[j];
  }
  return 0.5 * acc * state.grid().dx() / static_cast<double>(kFactor);
}

double h_alpha_norm(const Field& u, const Field& ux, const Parameters& params) {
  const double a2 = params.alpha() * params.alpha();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += u[j] * u[j] + a2 * ux[j] * ux[j];
  return std::sqrt(acc * u.grid().dx());
}

double h_alpha_norm(const Field& u, const Parameters& params) {
  return h_alpha_norm(u, derivative(u), params);
}

double l2_norm(const Field& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v * v;
  return std::sqrt(acc * f.grid().dx());
}

// ---------------------------------------------------------------------------
// Inequality gaps

GapField GapField::from(Field gap) {
  const std::size_t j = gap.argmin();
  const double value = gap[j];
  const double x = gap.grid().node(j);
  return GapField{std::move(gap), value, j, x};
}

std::pair<GapField, GapField> convolution_gaps(const Field& u, const Field& ux,
                                           const NonlocalOperator& op) {
  const Parameters& prm = op.params();
  const double a2 = prm.alpha() * prm.alpha();
  const double k = prm.k();
  const std::size_t n = u.size();
  std::vector<double> g(n), rhs(n);
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = 0.5 * a2 * ux[j] * ux[j] + u[j] * u[j] + 2.0 * k * u[j];
    const double s = u[j] + k;
    rhs[j] = 0.5 * s * s - k * k;
  }
  auto [minus, plus] = op.one_sided_convolutions(Field(u.grid(), std::move(g)));
  const Field r(u.grid(), std::move(rhs));
  return {GapField::from(minus - r), GapField::from(plus - r)};
}

std::pair<GapField, GapField> convolution_gaps(const Field& u, const NonlocalOperator& op) {
  return convolution_gaps(u, derivative(u), op);
}

GapField one_sided_gap(const Field& u, const Field& ux, const NonlocalOperator& op) {
  const Parameters& prm = op.params();
  const double a2 = prm.alpha() * prm.alpha();
  const double k = prm.k();
  const std::size_t n = u.size();
  std::vector<double> g(n), rhs(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = u[j] + k;
    g[j] = 0.5 * a2 * ux[j] * ux[j] + s * s;
    rhs[j] = 0.5 * s * s;
  }
  const Field conv = op.apply_Q(Field(u.grid(), std::move(g)));
  return GapField::from(conv - Field(u.grid(), std::move(rhs)));
}

GapField one_sided_gap(const Field& u, const NonlocalOperator& op) {
  return one_sided_gap(u, derivative(u), op);
}

double sobolev_gap(const Field& u, const Field& ux, const Parameters& params) {
  return h_alpha_norm(u, ux, params) / std::sqrt(2.0 * params.alpha()) - u.max_abs();
}

double sobolev_gap(const Field& u, const Parameters& params) {
  return sobolev_gap(u, derivative(u), params);
}

// ---------------------------------------------------------------------------
// Criteria

std::optional<double> blowup_time_bound(double u0, double slope, double k, double alpha) {
  const double shifted = (u0 + k) / alpha;
  const double radicand = slope * slope - shifted * shifted;
  if (!(radicand > 0.0)) return std::nullopt;
  return 2.0 / std::sqrt(radicand);
}

namespace {

struct Refined {
  double offset;  // in units of dx from the centre node
  double margin;
  double value;
  double slope;
};

// Golden-section refinement on the interpolant of the datum rotated so the
// discrete minimiser sits at the centre node. Rotating first makes the
// search bit-identical for data that differ by a whole-cell shift.
Refined refine_minimum(const Field& u0, std::size_t centre, double k, double alpha) {
  const Grid& grid = u0.grid();
  const std::size_t n = grid.size();
  const std::size_t mid = n / 2;
  std::vector<double> rotated(n);
  for (std::size_t j = 0; j < n; ++j) rotated[j] = u0[(j + centre + n - mid) % n];
  const Spectral sp(grid);
  const Spectrum c = sp.analyse(rotated);
  const double x_mid = grid.node(mid);
  const double dx = grid.dx();

  const Spectrum* spectra[] = {&c, &c};
  const int orders[] = {0, 1};
  auto eval = [&](double offset) {
    double vals[2];
    sp.evaluate_many(spectra, orders, x_mid + offset * dx, vals);
    return Refined{offset, alpha * vals[1] + std::abs(vals[0] + k), vals[0], vals[1]};
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -1.0, b = 1.0;
  Refined c1 = eval(b - inv_phi * (b - a));
  Refined c2 = eval(a + inv_phi * (b - a));
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    if (c1.margin <= c2.margin) {
      b = c2.offset;
      c2 = c1;
      c1 = eval(b - inv_phi * (b - a));
    } else {
      a = c1.offset;
      c1 = c2;
      c2 = eval(a + inv_phi * (b - a));
    }
  }
  Refined best = c1.margin <= c2.margin ? c1 : c2;
  const Refined at_node = eval(0.0);
  if (at_node.margin <= best.margin) best = at_node;
  return best;
}

}  // namespace

CriterionVerdict check_criterion_dgh(const Field& u0, const Parameters& params) {
  const double alpha = params.alpha();
  const double k = params.k();
  const Field ux = derivative(u0);
  std::size_t best = 0;
  double best_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u0.size(); ++j) {
    const double m = alpha * ux[j] + std::abs(u0[j] + k);
    if (m < best_margin) {
      best_margin = m;
      best = j;
    }
  }
  const Refined r = refine_minimum(u0, best, k, alpha);

  CriterionVerdict v;
  v.x0_best = u0.grid().node(best) + r.offset * u0.grid().dx();
  v.margin = r.margin;
  v.u0_at_x0 = r.value;
  v.slope_at_x0 = r.slope;
  v.holds = v.margin < 0.0;
  if (v.holds) v.time_bound = blowup_time_bound(r.value, r.slope, k, alpha);
  return v;
}

CriterionVerdict check_criterion_dgh2(const Field& u0, const Field& rho0, const Parameters& params,
                                      double rho_tol) {
  if (params.gamma() != 0.0) {
    throw InvalidArgument(
        "the two-component criterion requires gamma = 0");
  }
  const double alpha = params.alpha();
  const double k = 0.5 * params.c0();
  const Field ux = derivative(u0);

  CriterionVerdict v;
  v.rho_condition_met = false;
  double best_margin = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < u0.size(); ++j) {
    if (std::abs(rho0[j] + 1.0) > rho_tol) continue;
    const double m = alpha * ux[j] + std::abs(u0[j] + k);
    if (m < best_margin) {
      best_margin = m;
      best = j;
    }
  }
  if (!best) {
    // Condition (i) fails everywhere; report the plain slope criterion.
    const CriterionVerdict plain = check_criterion_dgh(u0, params);
    v.x0_best = plain.x0_best;
    v.margin = plain.margin;
    v.u0_at_x0 = plain.u0_at_x0;
    v.slope_at_x0 = plain.slope_at_x0;
    v.holds = false;
    return v;
  }
  v.rho_condition_met = true;
  v.x0_best = u0.grid().node(*best);
  v.margin = best_margin;
  v.u0_at_x0 = u0[*best];
  v.slope_at_x0 = ux[*best];
  v.holds = v.margin < 0.0;
  if (v.holds) v.time_bound = blowup_time_bound(v.u0_at_x0, v.slope_at_x0, k, alpha);
  return v;
}

// ---------------------------------------------------------------------------

Field random_band_limited_field(const Grid& grid, std::mt19937_64& rng, double max_xi, int modes) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.0, max_xi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> a(modes), xi(modes), phi(modes);
  for (int m = 0; m < modes; ++m) {
    a[m] = amp(rng);
    xi[m] = freq(rng);
    phi[m] = phase(rng);
  }
  const double width = grid.half_length() / 8.0;
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = grid.node(j);
    double s = 0.0;
    for (int m = 0; m < modes; ++m) s += a[m] * std::cos(xi[m] * x + phi[m]);
    v[j] = s * std::exp(-x * x / (2.0 * width * width));
  }
  return Field(grid, std::move(v));
}

}  // namespace dgh
