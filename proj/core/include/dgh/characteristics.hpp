#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgh/evolution.hpp"
#include "dgh/helmholtz.hpp"
#include "dgh/parameters.hpp"

namespace dgh {

/// A real number carried as sign * exp(log_magnitude) so exponential
/// weights cannot overflow.
struct SignedLog {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog of(double v) noexcept;
  /// exp(log_weight) * v
  static SignedLog weighted(double log_weight, double v) noexcept;
  /// Plain value, or nullopt if it does not fit in a double.
  std::optional<double> value() const noexcept;
  bool operator<(const SignedLog& other) const noexcept;
};

/// State of one characteristic at a recorded time.
struct PathPoint {
  double t = 0.0;
  double q = 0.0;
  double q_x = 1.0;
  double g = 0.0;        // Lagrangian slope u_x(t, q)
  double u = 0.0;        // u(t, q)
  double u_x_field = 0.0;  // spectral u_x interpolated at q
  double m = 0.0;        // (u - alpha^2 u_xx)(t, q)
  std::optional<double> rho_tilde;
};

struct WeightedAB {
  SignedLog A;
  SignedLog B;
  bool overflow = false;  // plain values are not representable
};

struct PlainAB {
  double A = 0.0;
  double B = 0.0;
  std::optional<double> h;  // sqrt(-A B) when A B < 0
};

WeightedAB weighted_AB(const PathPoint& p, const Parameters& params);
PlainAB plain_AB(const PathPoint& p, const Parameters& params);

/// (m0(x0) + k) - (m(t,q) + k) q_x^2.
double momentum_residual(const PathPoint& p, double m0_at_seed, const Parameters& params);

/// (rho~(t,q) + 1) q_x - (rho~0(x0) + 1). Throws without rho~.
double rho_invariant_residual(const PathPoint& p, double rho0_at_seed);

struct CharacteristicPath {
  double seed = 0.0;
  std::vector<PathPoint> points;
  std::vector<WeightedAB> weighted;
  std::vector<PlainAB> plain;
  std::vector<double> momentum_residuals;
  std::vector<double> rho_residuals;  // only when the density invariant applies
  bool truncated = false;
  std::string warning;

  std::size_t size() const noexcept { return points.size(); }
};

/// Integrates q' = u(t,q) + lambda, q_x' = g q_x and the slope equation
/// g' = -g^2/2 + (S(q) - P(q)) / alpha^2 through the recorded trajectory
/// (pre-blowup records only) with one RK4 step per recorded interval.
/// Between records u is the cubic Hermite interpolant built from the
/// recorded u and u_t; the nonlocal term at the midpoint is recomputed
/// from it. Off-grid values come from the trigonometric interpolant.
///
/// A path stops, with a warning, once q leaves [-L + 2 alpha, L - 2 alpha).
std::vector<CharacteristicPath> advect_many(const Trajectory& trajectory,
                                            std::span<const double> seeds,
                                            const NonlocalOperator& op);

CharacteristicPath advect(const Trajectory& trajectory, double x0, const NonlocalOperator& op);

// ---------------------------------------------------------------------------
// Path properties

struct PathCheck {
  bool passed = true;
  std::size_t checked = 0;      // number of comparisons made
  double worst_excess = 0.0;    // largest violation beyond tolerance (<= 0 if passed)
  std::optional<double> at_time;
};

/// A_weighted non-decreasing and B_weighted non-increasing, tolerance
/// 1e-8 (1 + |A|). Compared in log form when the weights overflow.
PathCheck check_ab_monotone(const CharacteristicPath& path);
/// Same on the plain variants.
PathCheck check_plain_ab_monotone(const CharacteristicPath& path);
/// If A(0) > 0 and B(0) < 0, the signs persist.
PathCheck check_sign_persistence(const CharacteristicPath& path);
/// g(t_{i+1}) < g(t_i) + tol.
PathCheck check_slope_decrease(const CharacteristicPath& path);
/// Secant of g bounded by the larger endpoint value of
/// (-g^2 + (u+k)^2 / alpha^2) / 2 plus tolerance.
PathCheck check_riccati(const CharacteristicPath& path, const Parameters& params);
/// Secant of h at least h(t_i)^2 / 2 minus tolerance.
PathCheck check_h_growth(const CharacteristicPath& path);
/// Paths sorted by seed stay strictly ordered in q.
PathCheck check_q_ordering(std::span<const CharacteristicPath> paths);

}  // namespace dgh
