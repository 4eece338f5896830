#pragma once

#include <stdexcept>
#include <string>

namespace dgh {

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical constants of the DGH equation and the two-component system.
///
/// `lambda` and `k` are derived and always recomputed from the raw
/// constants, so the pair (alpha, gamma, c0) fully determines the object:
///
///   lambda = -gamma / alpha^2
///   k      = (c0 + gamma / alpha^2) / 2
///
/// Parameters outside the band gamma + c0*alpha^2 >= 0 are accepted; the
/// band flag records which side of it we are on.
class Parameters {
 public:
  static Parameters make(double alpha, double gamma, double c0, double sigma = 1.0);

  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  double c0() const noexcept { return c0_; }
  double sigma() const noexcept { return sigma_; }
  double lambda() const noexcept { return lambda_; }
  double k() const noexcept { return k_; }
  bool in_band() const noexcept { return in_band_; }

  /// Same constants with c0 chosen so that k equals `k`, gamma kept.
  Parameters with_k(double k) const;

  static double lambda_of(double alpha, double gamma) noexcept;
  static double k_of(double alpha, double gamma, double c0) noexcept;

  friend bool operator==(const Parameters&, const Parameters&) = default;

 private:
  Parameters() = default;

  double alpha_ = 1.0;
  double gamma_ = 0.0;
  double c0_ = 0.0;
  double sigma_ = 1.0;
  double lambda_ = 0.0;
  double k_ = 0.0;
  bool in_band_ = true;
};

std::string describe(const Parameters& params);

}  // namespace dgh
