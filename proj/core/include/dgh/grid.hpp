#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dgh {

/// Uniform periodic grid on [-L, L) with N nodes x_j = -L + j*dx.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  Grid(double half_length, std::size_t n_points);

  double half_length() const noexcept { return half_length_; }
  double length() const noexcept { return 2.0 * half_length_; }
  std::size_t size() const noexcept { return n_points_; }
  double dx() const noexcept { return dx_; }

  double node(std::size_t j) const noexcept {
    return -half_length_ + static_cast<double>(j) * dx_;
  }
  std::vector<double> nodes() const;

  /// Index of the node nearest to x after wrapping into [-L, L).
  std::size_t nearest_node(double x) const noexcept;
  /// Maps x into [-L, L).
  double wrap(double x) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double half_length_;
  std::size_t n_points_;
  double dx_;
};

/// Real samples of a function on a Grid.
///
/// Values are finite unless the field was explicitly built with
/// `Field::post_blowup`, which is reserved for states recorded after
/// breaking has been detected.
class Field {
 public:
  Field(Grid grid, std::vector<double> values);
  static Field zeros(Grid grid);
  static Field constant(Grid grid, double value);
  static Field post_blowup(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  bool is_post_blowup() const noexcept { return post_blowup_; }

  double max_abs() const noexcept;
  double min() const noexcept;
  double max() const noexcept;
  std::size_t argmin() const noexcept;

  Field operator+(const Field& other) const;
  Field operator-(const Field& other) const;
  Field operator*(double scale) const;
  friend Field operator*(double scale, const Field& f) { return f * scale; }

  std::vector<double> release() && { return std::move(values_); }

 private:
  Field(Grid grid, std::vector<double> values, bool post_blowup);

  Grid grid_;
  std::vector<double> values_;
  bool post_blowup_ = false;
};

bool all_finite(std::span<const double> values) noexcept;

/// Instantaneous solution: u, plus rho_tilde = rho - 1 for the
/// two-component system.
struct State {
  double t = 0.0;
  Field u;
  std::optional<Field> rho_tilde;

  State(double time, Field velocity, std::optional<Field> density = std::nullopt);

  bool two_component() const noexcept { return rho_tilde.has_value(); }
  const Grid& grid() const noexcept { return u.grid(); }
};

}  // namespace dgh
