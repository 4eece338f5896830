#include "dgh/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgh/parameters.hpp"

namespace dgh {

Grid::Grid(double half_length, std::size_t n_points)
    : half_length_(half_length), n_points_(n_points), dx_(0.0) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidArgument("grid half length must be positive and finite");
  }
  if (n_points < kMinPoints || n_points % 2 != 0) {
    throw InvalidArgument("grid needs an even number of points >= 16, got " +
                          std::to_string(n_points));
  }
  dx_ = 2.0 * half_length / static_cast<double>(n_points);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) x[j] = node(j);
  return x;
}

double Grid::wrap(double x) const noexcept {
  const double len = length();
  double y = std::fmod(x + half_length_, len);
  if (y < 0.0) y += len;
  return y - half_length_;
}

std::size_t Grid::nearest_node(double x) const noexcept {
  const double s = (wrap(x) + half_length_) / dx_;
  auto j = static_cast<long long>(std::llround(s));
  const auto n = static_cast<long long>(n_points_);
  j %= n;
  if (j < 0) j += n;
  return static_cast<std::size_t>(j);
}

bool all_finite(std::span<const double> values) noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field::Field(Grid grid, std::vector<double> values) : Field(grid, std::move(values), false) {}

Field::Field(Grid grid, std::vector<double> values, bool post_blowup)
    : grid_(grid), values_(std::move(values)), post_blowup_(post_blowup) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) +
                          " samples but the grid has " + std::to_string(grid_.size()));
  }
  if (!post_blowup_ && !all_finite(values_)) {
    throw InvalidArgument("field contains non-finite values");
  }
}

Field Field::zeros(Grid grid) { return constant(grid, 0.0); }

Field Field::constant(Grid grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

Field Field::post_blowup(Grid grid, std::vector<double> values) {
  return Field(grid, std::move(values), true);
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

std::size_t Field::argmin() const noexcept {
  return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) -
                                  values_.begin());
}

Field Field::operator+(const Field& other) const {
  if (!(grid_ == other.grid_)) throw InvalidArgument("fields live on different grids");
  std::vector<double> out(values_);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += other.values_[j];
  return Field(grid_, std::move(out), post_blowup_ || other.post_blowup_);
}

Field Field::operator-(const Field& other) const { return *this + other * -1.0; }

Field Field::operator*(double scale) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= scale;
  return Field(grid_, std::move(out), post_blowup_);
}

State::State(double time, Field velocity, std::optional<Field> density)
    : t(time), u(std::move(velocity)), rho_tilde(std::move(density)) {
  if (rho_tilde && !(rho_tilde->grid() == u.grid())) {
    throw InvalidArgument("rho_tilde must share the grid of u");
  }
}

}  // namespace dgh
