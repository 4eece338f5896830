#include "dgh/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "dgh/parameters.hpp"

namespace dgh {
namespace {

// (i xi)^order without going through std::pow.
Complex i_xi_power(double xi, int order) {
  switch (order % 4) {
    case 0: return {std::pow(xi, order), 0.0};
    case 1: return {0.0, std::pow(xi, order)};
    case 2: return {-std::pow(xi, order), 0.0};
    default: return {0.0, -std::pow(xi, order)};
  }
}

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const FourierTransform> FourierTransform::for_size(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const FourierTransform>> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FourierTransform> t(new FourierTransform(n));
  cache.emplace(n, t);
  return t;
}

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
  if (n < 2) throw InvalidArgument("transform length must be at least 2");
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  double* real = fftw_alloc_real(n);
  fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real, cplx, flags);
  inverse_plan_ = fftw_plan_dft_c2r_1d(len, cplx, real, flags);
  fftw_free(cplx);
  fftw_free(real);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FourierTransform::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != modes()) throw InvalidArgument("forward: size mismatch");
  // r2c leaves its input intact but FFTW's signature is non-const.
  std::vector<double> work(in.begin(), in.end());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), work.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& c : out) c *= scale;
}

void FourierTransform::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != modes() || out.size() != n_) throw InvalidArgument("inverse: size mismatch");
  // c2r destroys its input.
  std::vector<Complex> work(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(work.data()), out.data());
}

Spectral::Spectral(const Grid& grid)
    : grid_(grid),
      padded_(3 * grid.size() / 2),
      fft_(FourierTransform::for_size(grid.size())),
      padded_fft_(FourierTransform::for_size(3 * grid.size() / 2)),
      wavenumbers_(grid.size() / 2 + 1) {
  const double base = std::numbers::pi / grid.half_length();
  for (std::size_t k = 0; k < wavenumbers_.size(); ++k) {
    wavenumbers_[k] = base * static_cast<double>(k);
  }
}

Spectrum Spectral::analyse(std::span<const double> samples) const {
  Spectrum c(modes());
  fft_->forward(samples, c);
  return c;
}

std::vector<double> Spectral::synthesise(const Spectrum& coeffs) const {
  std::vector<double> out(grid_.size());
  fft_->inverse(coeffs, out);
  return out;
}

void Spectral::differentiate_in_place(Spectrum& coeffs, int order) const {
  if (order <= 0) return;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= i_xi_power(wavenumbers_[k], order);
  }
  if (order % 2 == 1) coeffs.back() = 0.0;
}

std::vector<double> Spectral::derivative(std::span<const double> samples, int order) const {
  Spectrum c = analyse(samples);
  differentiate_in_place(c, order);
  return synthesise(c);
}

Spectrum Spectral::dealiased_product(const Spectrum& a, const Spectrum& b) const {
  const std::size_t n_half = grid_.size() / 2;
  const std::size_t m_modes = padded_ / 2 + 1;
  Spectrum pa(m_modes, 0.0), pb(m_modes, 0.0);
  for (std::size_t k = 0; k < n_half; ++k) {
    pa[k] = a[k];
    pb[k] = b[k];
  }
  std::vector<double> fa(padded_), fb(padded_);
  padded_fft_->inverse(pa, fa);
  padded_fft_->inverse(pb, fb);
  for (std::size_t j = 0; j < padded_; ++j) fa[j] *= fb[j];
  Spectrum prod(m_modes);
  padded_fft_->forward(fa, prod);
  Spectrum out(modes(), 0.0);
  for (std::size_t k = 0; k < n_half; ++k) out[k] = prod[k];
  return out;
}

void Spectral::phases(double x, std::vector<Complex>& out) const {
  // exp(i k theta) by recurrence, re-anchored every 32 modes to bound drift.
  const double theta = wavenumbers_.size() > 1 ? wavenumbers_[1] * (x + grid_.half_length()) : 0.0;
  const Complex step = std::polar(1.0, theta);
  out.resize(modes());
  Complex w(1.0, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k % 32 == 0) w = std::polar(1.0, theta * static_cast<double>(k));
    out[k] = w;
    w *= step;
  }
}

void Spectral::evaluate_many(std::span<const Spectrum* const> spectra, std::span<const int> orders,
                             double x, std::span<double> out) const {
  std::vector<Complex> w;
  phases(x, w);
  const std::size_t last = modes() - 1;
  for (std::size_t s = 0; s < spectra.size(); ++s) {
    const Spectrum& c = *spectra[s];
    const int order = orders[s];
    double acc = 0.0;
    for (std::size_t k = 1; k < last; ++k) {
      Complex term = c[k] * w[k];
      if (order > 0) term *= i_xi_power(wavenumbers_[k], order);
      acc += 2.0 * term.real();
    }
    double value = order == 0 ? c[0].real() : 0.0;
    // Nyquist mode contributes its real cosine part; odd derivatives drop it.
    if (order % 2 == 0) {
      const double sign = (order / 2) % 2 == 0 ? 1.0 : -1.0;
      value += sign * std::pow(wavenumbers_[last], order) * c[last].real() * w[last].real();
    }
    out[s] = value + acc;
  }
}

double Spectral::evaluate(const Spectrum& coeffs, double x, int order) const {
  const Spectrum* ptr = &coeffs;
  double result = 0.0;
  evaluate_many(std::span<const Spectrum* const>(&ptr, 1), std::span<const int>(&order, 1), x,
                std::span<double>(&result, 1));
  return result;
}

std::vector<double> Spectral::upsample(const Spectrum& coeffs, std::size_t factor) const {
  if (factor == 1) return synthesise(coeffs);
  const std::size_t m = factor * grid_.size();
  auto fine = FourierTransform::for_size(m);
  Spectrum padded(fine->modes(), 0.0);
  const std::size_t last = modes() - 1;
  for (std::size_t k = 0; k < last; ++k) padded[k] = coeffs[k];
  // The coarse Nyquist mode is a pure cosine; split it evenly between +-k.
  padded[last] = 0.5 * coeffs[last].real();
  std::vector<double> out(m);
  fine->inverse(padded, out);
  return out;
}

double Spectral::integral(const Spectrum& coeffs) const noexcept {
  return coeffs[0].real() * grid_.length();
}

Field derivative(const Field& f, int order) {
  Spectral spectral(f.grid());
  return Field(f.grid(), spectral.derivative(f.values(), order));
}

}  // namespace dgh
