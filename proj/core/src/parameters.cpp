#include "dgh/parameters.hpp"

#include <cmath>
#include <sstream>

namespace dgh {

double Parameters::lambda_of(double alpha, double gamma) noexcept {
  return 0.0 - gamma / (alpha * alpha);
}

double Parameters::k_of(double alpha, double gamma, double c0) noexcept {
  return 0.5 * (c0 + gamma / (alpha * alpha));
}

Parameters Parameters::make(double alpha, double gamma, double c0, double sigma) {
  if (!std::isfinite(alpha) || !std::isfinite(gamma) || !std::isfinite(c0) ||
      !std::isfinite(sigma)) {
    throw InvalidArgument("parameters must be finite");
  }
  // alpha = 0 is the KdV limit, which has no wave breaking.
  if (alpha <= 0.0) {
    throw InvalidArgument("alpha must be strictly positive (alpha = 0 is the KdV limit)");
  }
  Parameters p;
  p.alpha_ = alpha;
  p.gamma_ = gamma;
  p.c0_ = c0;
  p.sigma_ = sigma;
  p.lambda_ = lambda_of(alpha, gamma);
  p.k_ = k_of(alpha, gamma, c0);
  p.in_band_ = gamma + c0 * alpha * alpha >= 0.0;
  return p;
}

Parameters Parameters::with_k(double k) const {
  return make(alpha_, gamma_, 2.0 * k - gamma_ / (alpha_ * alpha_), sigma_);
}

std::string describe(const Parameters& p) {
  std::ostringstream os;
  os << "alpha=" << p.alpha() << " gamma=" << p.gamma() << " c0=" << p.c0()
     << " sigma=" << p.sigma() << " (lambda=" << p.lambda() << ", k=" << p.k()
     << (p.in_band() ? ", in band)" : ", out of band)");
  return os.str();
}

}  // namespace dgh
