#include "dgh/helmholtz.hpp"

#include <cmath>

namespace dgh {

double green_kernel(double x, const Parameters& params) noexcept {
  const double a = params.alpha();
  return std::exp(-std::abs(x) / a) / (2.0 * a);
}

NonlocalOperator::NonlocalOperator(const Grid& grid, const Parameters& params)
    : spectral_(std::make_shared<const Spectral>(grid)), params_(params) {
  const auto xi = spectral_->wavenumbers();
  const double a2 = params.alpha() * params.alpha();
  q_symbol_.resize(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) q_symbol_[k] = 1.0 / (1.0 + a2 * xi[k] * xi[k]);
}

void NonlocalOperator::apply_Q_in_place(Spectrum& coeffs) const noexcept {
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= q_symbol_[k];
}

void NonlocalOperator::apply_dQ_in_place(Spectrum& coeffs) const noexcept {
  const auto xi = spectral_->wavenumbers();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= Complex(0.0, xi[k] * q_symbol_[k]);
  }
  coeffs.back() = 0.0;
}

Field NonlocalOperator::apply_Q(const Field& f) const {
  Spectrum c = spectral_->analyse(f.values());
  apply_Q_in_place(c);
  return Field(f.grid(), spectral_->synthesise(c));
}

Field NonlocalOperator::apply_dQ(const Field& f) const {
  Spectrum c = spectral_->analyse(f.values());
  apply_dQ_in_place(c);
  return Field(f.grid(), spectral_->synthesise(c));
}

std::pair<Field, Field> NonlocalOperator::one_sided_convolutions(const Field& f) const {
  const Field q = apply_Q(f);
  const Field dq = apply_dQ(f) * params_.alpha();
  return {q - dq, q + dq};
}

NonlocalOperator NonlocalOperator::corrupted_for_testing() const {
  NonlocalOperator bad(*this);
  for (double& s : bad.q_symbol_) s = -s;
  bad.corrupted_ = true;
  return bad;
}

}  // namespace dgh
