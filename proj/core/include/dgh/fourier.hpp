#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dgh/grid.hpp"

namespace dgh {

using Complex = std::complex<double>;

/// Normalised Fourier coefficients c_k, k = 0..N/2, of a real periodic
/// sample vector: f(x) = sum_k c_k exp(i xi_k (x + L)) with xi_k = pi k / L.
using Spectrum = std::vector<Complex>;

/// Real-to-complex FFT of a fixed length backed by FFTW.
///
/// Plans are created once per length and shared process-wide. Execution
/// uses FFTW's new-array interface, so a single instance may be used from
/// several threads at the same time.
class FourierTransform {
 public:
  static std::shared_ptr<const FourierTransform> for_size(std::size_t n);

  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t modes() const noexcept { return n_ / 2 + 1; }

  /// Coefficients scaled by 1/N.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Unscaled synthesis: out_j = sum_k c_k exp(2 pi i k j / N) (Hermitian).
  void inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  explicit FourierTransform(std::size_t n);

  std::size_t n_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Spectral calculus on one Grid: transforms, multipliers, alias-free
/// products by 3/2 zero padding, and trigonometric interpolation.
class Spectral {
 public:
  explicit Spectral(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t modes() const noexcept { return wavenumbers_.size(); }
  std::span<const double> wavenumbers() const noexcept { return wavenumbers_; }

  Spectrum analyse(std::span<const double> samples) const;
  std::vector<double> synthesise(const Spectrum& coeffs) const;

  /// Multiplies by (i xi)^order in place. Odd orders drop the Nyquist mode.
  void differentiate_in_place(Spectrum& coeffs, int order = 1) const;
  std::vector<double> derivative(std::span<const double> samples, int order = 1) const;

  /// Spectrum of the product of two band-limited fields with aliasing
  /// removed (zero padding to 3N/2 points, Nyquist mode discarded).
  Spectrum dealiased_product(const Spectrum& a, const Spectrum& b) const;

  /// Evaluates the trigonometric interpolant (or its `order`-th derivative)
  /// at an arbitrary point.
  double evaluate(const Spectrum& coeffs, double x, int order = 0) const;

  /// Evaluates several spectra at one point, sharing the exponentials.
  /// `orders[i]` is the derivative order applied to `spectra[i]`.
  void evaluate_many(std::span<const Spectrum* const> spectra, std::span<const int> orders,
                     double x, std::span<double> out) const;

  /// Samples the trigonometric interpolant on `factor * N` equispaced
  /// nodes starting at -L.
  std::vector<double> upsample(const Spectrum& coeffs, std::size_t factor) const;

  /// Integral over the box of the trigonometric interpolant.
  double integral(const Spectrum& coeffs) const noexcept;

 private:
  void phases(double x, std::vector<Complex>& out) const;

  Grid grid_;
  std::size_t padded_;
  std::shared_ptr<const FourierTransform> fft_;
  std::shared_ptr<const FourierTransform> padded_fft_;
  std::vector<double> wavenumbers_;
};

/// Spectral derivative of a field on its own periodic grid.
Field derivative(const Field& f, int order = 1);

}  // namespace dgh
