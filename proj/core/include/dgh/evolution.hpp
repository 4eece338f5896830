#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "dgh/fourier.hpp"
#include "dgh/grid.hpp"
#include "dgh/helmholtz.hpp"
#include "dgh/parameters.hpp"

namespace dgh {

/// Raised when a Runge-Kutta stage produces a non-finite value.
class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double t_max = 1.0;
  double cfl = 0.3;
  double dt_min = 1e-9;
  double slope_blowup_threshold = 1e4;
  std::size_t record_every = 1;
  /// Carry Lagrangian slope markers from every grid node (see simulate).
  bool track_slopes = true;

  void validate() const;
};

/// Right-hand side of the nonlocal transport form
///
///   u_t   = -(u + lambda) u_x - d/dx p * G,
///   G     = alpha^2/2 u_x^2 + u^2 + 2k u [+ sigma (rho~^2/2 + rho~)],
///   rho~_t = -u rho~_x - u_x (rho~ + 1),
///
/// with every product inside G formed alias-free.
class RightHandSide {
 public:
  explicit RightHandSide(const NonlocalOperator& op);

  struct Evaluation {
    std::vector<double> u_t;
    std::vector<double> rho_t;     // empty for the one-component equation
    std::vector<double> u_x;
    std::vector<double> nonlocal;  // P = p * G
  };

  /// `rho` may be empty.
  void evaluate(std::span<const double> u, std::span<const double> rho, Evaluation& out) const;

  const NonlocalOperator& op() const noexcept { return op_; }

 private:
  const NonlocalOperator& op_;
};

/// u_t for the one-component equation.
Field dgh_rhs(const Field& u, const NonlocalOperator& op);

/// (u_t, rho~_t) for the two-component system; throws without rho~.
std::pair<Field, Field> dgh2_rhs(const State& state, const NonlocalOperator& op);

/// One classical RK4 step of the field equations. Throws NumericalBreakdown
/// if any stage turns non-finite.
State step_rk4(const State& state, double dt, const NonlocalOperator& op);

/// dt = cfl dx / max(max|u| + |lambda|, eps), further limited to
/// cfl / max_slope when slopes are large, and capped at the remaining
/// horizon.
double adaptive_dt(const State& state, const SolverConfig& config, const Parameters& params,
                   double max_slope = 0.0);

struct Diagnostics {
  double min_ux = 0.0;       // min over grid slopes and slope markers
  double min_ux_grid = 0.0;  // min of the spectral u_x on the grid
  double max_abs_u = 0.0;
  double dt = 0.0;           // step that led to this record (0 for the first)
  double energy_E = 0.0;
  double energy_F = 0.0;
};

struct Record {
  State state;
  Diagnostics diag;
  bool post_blowup = false;  // at or after detection; excluded from invariant checks
};

class Trajectory {
 public:
  void push(Record r);
  /// Flags the last record as at-or-after detection.
  void mark_back_post_blowup();
  const std::vector<Record>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }
  const Record& front() const { return records_.front(); }
  const Record& back() const { return records_.back(); }
  bool empty() const noexcept { return records_.empty(); }

  /// Records strictly before detection.
  std::span<const Record> pre_blowup() const noexcept;

 private:
  std::vector<Record> records_;
};

enum class Trigger { slope_threshold, dt_underflow, horizon_reached };
std::string_view trigger_name(Trigger t) noexcept;

struct BlowupReport {
  bool blew_up = false;
  std::optional<double> t_detect;
  Trigger trigger = Trigger::horizon_reached;
  double min_slope_at_detect = 0.0;
  std::size_t steps = 0;
};

struct SimulationResult {
  Trajectory trajectory;
  BlowupReport report;
};

/// Integrates until t_max, a slope-threshold crossing, or breakdown.
///
/// The spectral u_x on a grid of spacing dx cannot exceed roughly
/// sqrt(E / dx) while the H^1 energy E is conserved, so it saturates long
/// before the breaking slope. Breaking is therefore detected on slope
/// markers: one characteristic per grid node carrying g = u_x along it,
///
///   q' = u(q) + lambda,   g' = -g^2/2 + S(q)/alpha^2 - P(q)/alpha^2,
///
/// where S is the local part of G and P = p * G. Both are bounded up to
/// the breaking time, so g follows the true slope all the way to -infinity.
SimulationResult simulate(const State& initial, const SolverConfig& config,
                          const NonlocalOperator& op);

}  // namespace dgh
