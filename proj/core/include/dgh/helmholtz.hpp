#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "dgh/fourier.hpp"
#include "dgh/grid.hpp"
#include "dgh/parameters.hpp"

namespace dgh {

/// Green kernel of 1 - alpha^2 d^2/dx^2 on the line: exp(-|x|/alpha) / (2 alpha).
double green_kernel(double x, const Parameters& params) noexcept;

/// Q = (1 - alpha^2 d^2/dx^2)^{-1} and d/dx Q as Fourier multipliers on a
/// periodic grid. This is exactly convolution with the periodised kernel
/// sum_n p(x + 2 L n).
class NonlocalOperator {
 public:
  NonlocalOperator(const Grid& grid, const Parameters& params);

  const Grid& grid() const noexcept { return spectral_->grid(); }
  const Parameters& params() const noexcept { return params_; }
  const Spectral& spectral() const noexcept { return *spectral_; }

  std::span<const double> q_symbol() const noexcept { return q_symbol_; }

  Field apply_Q(const Field& f) const;
  Field apply_dQ(const Field& f) const;

  /// ((p - alpha p') * f, (p + alpha p') * f). The first kernel is 2p on
  /// x > 0 (a left-to-right exponential average), the second 2p on x < 0.
  std::pair<Field, Field> one_sided_convolutions(const Field& f) const;

  void apply_Q_in_place(Spectrum& coeffs) const noexcept;
  void apply_dQ_in_place(Spectrum& coeffs) const noexcept;

  /// Negative-control hook: the same operator with the sign of both symbols
  /// flipped, which breaks positivity of the kernel.
  NonlocalOperator corrupted_for_testing() const;
  bool corrupted() const noexcept { return corrupted_; }

 private:
  std::shared_ptr<const Spectral> spectral_;
  Parameters params_;
  std::vector<double> q_symbol_;
  bool corrupted_ = false;
};

}  // namespace dgh
