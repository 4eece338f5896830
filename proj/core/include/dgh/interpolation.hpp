#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "dgh/grid.hpp"

namespace dgh {

/// Eight-point Lagrange interpolation on a uniform periodic grid.
///
/// Used where many off-grid evaluations per step are needed and an O(N)
/// trigonometric sum per point would dominate the cost.
class LocalInterpolator {
 public:
  static constexpr std::size_t kStencil = 8;

  struct Stencil {
    std::array<std::size_t, kStencil> index{};
    std::array<double, kStencil> weight{};
  };

  explicit LocalInterpolator(const Grid& grid) : grid_(grid) {}

  Stencil stencil(double x) const noexcept;

  static double apply(const Stencil& s, std::span<const double> values) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < kStencil; ++i) acc += s.weight[i] * values[s.index[i]];
    return acc;
  }

  double operator()(std::span<const double> values, double x) const noexcept {
    return apply(stencil(x), values);
  }

 private:
  Grid grid_;
};

}  // namespace dgh
