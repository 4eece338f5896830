#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <utility>

#include "dgh/grid.hpp"
#include "dgh/helmholtz.hpp"
#include "dgh/parameters.hpp"

namespace dgh {

// ---------------------------------------------------------------------------
// Conserved functionals and norms

/// E = 1/2 int (u^2 + alpha^2 u_x^2 [+ rho~^2]), trapezoid rule.
double energy_E(const State& state, const Parameters& params);

/// F = 1/2 int (u^3 + alpha^2 u u_x^2 + c0 u^2 - gamma u_x^2
///              [+ 2 u rho~ + u rho~^2]).
/// Cubic terms are integrated exactly for the trigonometric interpolant by
/// evaluating on a grid twice as fine.
double energy_F(const State& state, const Parameters& params);

/// sqrt(int u^2 + alpha^2 u_x^2), spectral derivative.
double h_alpha_norm(const Field& u, const Parameters& params);
/// Same, with a caller-supplied derivative (exact preset slopes).
double h_alpha_norm(const Field& u, const Field& ux, const Parameters& params);

double l2_norm(const Field& f);

// ---------------------------------------------------------------------------
// Convolution inequalities as pointwise gap fields (LHS - RHS)

struct GapField {
  Field gap;
  double min_gap;
  std::size_t argmin;
  double argmin_x;

  static GapField from(Field gap);
};

/// Gaps of (p -/+ alpha p') * (alpha^2/2 u_x^2 + u^2 + 2ku) >= (u+k)^2/2 - k^2.
/// The first entry is the (p - alpha p') inequality.
std::pair<GapField, GapField> convolution_gaps(const Field& u, const NonlocalOperator& op);
std::pair<GapField, GapField> convolution_gaps(const Field& u, const Field& ux,
                                           const NonlocalOperator& op);

/// Gap of p * (alpha^2/2 u_x^2 + (u+k)^2) >= (u+k)^2 / 2.
GapField one_sided_gap(const Field& u, const NonlocalOperator& op);
GapField one_sided_gap(const Field& u, const Field& ux, const NonlocalOperator& op);

/// ||u||_{H^1_alpha} / sqrt(2 alpha) - max|u|; nonnegative by the
/// embedding inequality.
double sobolev_gap(const Field& u, const Parameters& params);
double sobolev_gap(const Field& u, const Field& ux, const Parameters& params);

// ---------------------------------------------------------------------------
// Local-in-space blowup criteria

struct CriterionVerdict {
  bool holds = false;
  double x0_best = 0.0;
  double margin = 0.0;  // alpha u0'(x0) + |u0(x0) + k|; holds iff < 0
  double u0_at_x0 = 0.0;
  double slope_at_x0 = 0.0;
  std::optional<double> time_bound;
  std::optional<bool> rho_condition_met;  // two-component only
};

/// 2 / sqrt(slope^2 - (u0 + k)^2 / alpha^2), or nullopt when the radicand
/// is not positive.
std::optional<double> blowup_time_bound(double u0, double slope, double k, double alpha);

/// Scans grid nodes for the minimiser of alpha u0' + |u0 + k| and refines
/// it by golden-section search on the trigonometric interpolant over the
/// neighbouring cells.
CriterionVerdict check_criterion_dgh(const Field& u0, const Parameters& params);

/// Two-component criterion (gamma must be 0): among nodes with
/// |rho0 + 1| <= rho_tol, minimise alpha u0' + |u0 + c0/2|.
CriterionVerdict check_criterion_dgh2(const Field& u0, const Field& rho0, const Parameters& params,
                                      double rho_tol = 1e-10);

// ---------------------------------------------------------------------------
// Test data

/// Smooth random field: a few random Fourier modes (wavenumber <= max_xi)
/// under a Gaussian window of width L/8, so it is numerically zero at the
/// box edges.
Field random_band_limited_field(const Grid& grid, std::mt19937_64& rng, double max_xi = 4.0,
                                int modes = 6);

}  // namespace dgh
