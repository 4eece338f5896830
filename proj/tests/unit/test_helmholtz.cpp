#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "dgh/analysis.hpp"
#include "dgh/fourier.hpp"
#include "dgh/helmholtz.hpp"
#include "support.hpp"

using namespace dgh;
using dgh::testing::dot;
using dgh::testing::max_abs_diff;
using dgh::testing::sample;

namespace {

// Composite 8-point Gauss-Legendre on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 4; ++i) {
      s += ws[i] * (f(mid - 0.5 * h * xs[i]) + f(mid + 0.5 * h * xs[i]));
    }
  }
  return 0.5 * h * s;
}

// Integral of kernel(x - y) f(y) over [lo, hi], split where the periodic
// images of the kernel have kinks.
double kinked_quadrature(const std::function<double(double)>& integrand, double x, double lo,
                         double hi, double period) {
  std::vector<double> cuts{lo, hi};
  for (int n = -3; n <= 3; ++n) {
    const double c = x + n * period;
    if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += gauss_legendre(integrand, cuts[i], cuts[i + 1], 64);
  return s;
}

// Whole-line convolution of p with exp(-y^2 / (2 s^2)).
double gaussian_convolution(double x, double s, double alpha) {
  const double c = s * std::sqrt(std::numbers::pi / 2.0) * std::exp(s * s / (2 * alpha * alpha));
  const double r = 1.0 / std::sqrt(2.0);
  return c / (2 * alpha) *
         (std::exp(-x / alpha) * std::erfc(r * (s / alpha - x / s)) +
          std::exp(x / alpha) * std::erfc(r * (s / alpha + x / s)));
}

}  // namespace

TEST(GreenKernel, Values) {
  const auto p1 = Parameters::make(1.0, 0.0, 0.0);
  EXPECT_EQ(green_kernel(0.0, p1), 0.5);
  for (double a : {0.5, 1.0, 3.0}) {
    const auto p = Parameters::make(a, 0.0, 0.0);
    EXPECT_NEAR(green_kernel(a, p), std::exp(-1.0) / (2 * a), 1e-16);
    EXPECT_EQ(green_kernel(-a, p), green_kernel(a, p));
  }
}

TEST(GreenKernel, UnitMass) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto p = Parameters::make(a, 0.0, 0.0);
    const double L = 20.0 * a;
    auto k = [&](double x) { return green_kernel(x, p); };
    const double mass = gauss_legendre(k, -L, 0.0, 256) + gauss_legendre(k, 0.0, L, 256);
    EXPECT_NEAR(mass, 1.0, 1e-8) << a;
  }
}

TEST(NonlocalOperator, Symbol) {
  const auto p = Parameters::make(1.3, 0.0, 0.0);
  const NonlocalOperator op(Grid(10.0, 128), p);
  const auto q = op.q_symbol();
  EXPECT_EQ(q[0], 1.0);
  for (double v : q) {
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ApplyQ, FixesConstants) {
  const auto p = Parameters::make(1.0, 0.0, 0.0);
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, p);
  EXPECT_LT(max_abs_diff(op.apply_Q(Field::constant(g, 2.5)), Field::constant(g, 2.5)), 1e-14);
}

TEST(ApplyQ, CosineEigenfunction) {
  const double L = 20.0;
  const Grid g(L, 1024);
  for (double a : {0.5, 1.0, 2.0}) {
    const NonlocalOperator op(g, Parameters::make(a, 0.0, 0.0));
    const double xi = 7 * std::numbers::pi / L;
    const Field f = sample(g, [&](double x) { return std::cos(xi * x); });
    EXPECT_LT(max_abs_diff(op.apply_Q(f), f * (1.0 / (1.0 + a * a * xi * xi))), 1e-10);
  }
}

TEST(ApplyQ, NarrowSpikeMatchesPeriodisedQuadrature) {
  const double alpha = 1.0, L = 20.0, s = 0.15;
  const auto p = Parameters::make(alpha, 0.0, 0.0);
  const Grid g(L, 4096);
  const NonlocalOperator op(g, p);
  auto f = [&](double y) { return std::exp(-(y - 0.3) * (y - 0.3) / (2 * s * s)); };
  const Field qf = op.apply_Q(sample(g, f));
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); j += 37) {
    const double x = g.node(j);
    auto integrand = [&](double y) {
      double k = 0.0;
      for (int n = -3; n <= 3; ++n) k += green_kernel(x - y + 2 * L * n, p);
      return k * f(y);
    };
    const double oracle = kinked_quadrature(integrand, x, 0.3 - 12 * s, 0.3 + 12 * s, 2 * L);
    worst = std::max(worst, std::abs(oracle - qf[j]));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(ApplyDQ, ConstantsVanish) {
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  EXPECT_LT(op.apply_dQ(Field::constant(g, -4.0)).max_abs(), 1e-14);
}

TEST(ApplyDQ, FactorsThroughDerivative) {
  const Grid g(20.0, 1024);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    const Field f = random_band_limited_field(g, rng);
    EXPECT_LT(max_abs_diff(op.apply_dQ(f), derivative(op.apply_Q(f))), 1e-12);
  }
}

TEST(ApplyQ, HelmholtzIdentityResidual) {
  const Grid g(20.0, 4096);
  std::mt19937_64 rng(99);
  for (double a : {0.5, 1.0, 2.0}) {
    const NonlocalOperator op(g, Parameters::make(a, 0.0, 0.0));
    for (int i = 0; i < 5; ++i) {
      const Field f = random_band_limited_field(g, rng);
      const Field pf = op.apply_Q(f);
      const Field residual = pf - f - (a * a) * derivative(pf, 2);
      EXPECT_LT(residual.max_abs(), 1e-10);
    }
  }
}

TEST(OneSided, Constants) {
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  const auto [m, p] = op.one_sided_convolutions(Field::constant(g, 1.7));
  EXPECT_LT(max_abs_diff(m, Field::constant(g, 1.7)), 1e-14);
  EXPECT_LT(max_abs_diff(p, Field::constant(g, 1.7)), 1e-14);
}

TEST(OneSided, SumIsTwiceQ) {
  const Grid g(20.0, 1024);
  const NonlocalOperator op(g, Parameters::make(0.7, 0.0, 0.0));
  std::mt19937_64 rng(4);
  const Field f = random_band_limited_field(g, rng);
  const auto [m, p] = op.one_sided_convolutions(f);
  EXPECT_LT(max_abs_diff(m + p, 2.0 * op.apply_Q(f)), 1e-12);
}

TEST(OneSided, PositiveAndMatchesCausalQuadrature) {
  const double alpha = 1.0, L = 20.0, s = 0.5;
  const auto prm = Parameters::make(alpha, 0.0, 0.0);
  const Grid g(L, 4096);
  const NonlocalOperator op(g, prm);
  auto f = [&](double y) { return std::exp(-y * y / (2 * s * s)); };
  const auto [minus, plus] = op.one_sided_convolutions(sample(g, f));
  EXPECT_GE(minus.min(), -1e-12);
  EXPECT_GE(plus.min(), -1e-12);
  // 2p on the positive half-line: average over y < x (and images).
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); j += 41) {
    const double x = g.node(j);
    auto left = [&](double y) {
      double k = 0.0;
      for (int n = -3; n <= 3; ++n) {
        const double z = x - y + 2 * L * n;
        if (z > 0) k += 2 * green_kernel(z, prm);
      }
      return k * f(y);
    };
    auto right = [&](double y) {
      double k = 0.0;
      for (int n = -3; n <= 3; ++n) {
        const double z = x - y + 2 * L * n;
        if (z < 0) k += 2 * green_kernel(z, prm);
      }
      return k * f(y);
    };
    worst = std::max(worst, std::abs(kinked_quadrature(left, x, -12 * s, 12 * s, 2 * L) - minus[j]));
    worst = std::max(worst, std::abs(kinked_quadrature(right, x, -12 * s, 12 * s, 2 * L) - plus[j]));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(ApplyQ, SelfAdjoint) {
  const Grid g(20.0, 2048);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const Field f = random_band_limited_field(g, rng);
    const Field h = random_band_limited_field(g, rng);
    const double a = dot(f, op.apply_Q(h));
    const double b = dot(op.apply_Q(f), h);
    EXPECT_NEAR(a, b, 1e-10 * std::max(std::abs(a), 1e-3));
  }
}

TEST(ApplyQ, SupContractionOnNonnegativeInput) {
  const Grid g(20.0, 1024);
  const NonlocalOperator op(g, Parameters::make(0.8, 0.0, 0.0));
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const Field r = random_band_limited_field(g, rng);
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = r[j] * r[j];
    const Field f(g, std::move(v));
    EXPECT_LE(op.apply_Q(f).max_abs(), f.max_abs() * (1 + 1e-12));
  }
}

TEST(ApplyQ, PeriodisationError) {
  // Field numerically supported in [-L/2, L/2] on a short box so the image
  // contribution is visible above round-off.
  const double alpha = 1.0, L = 8.0, s = 0.5;
  const Grid g(L, 1024);
  const NonlocalOperator op(g, Parameters::make(alpha, 0.0, 0.0));
  const Field f = sample(g, [&](double y) { return std::exp(-y * y / (2 * s * s)); });
  const Field qf = op.apply_Q(f);
  const double mass = s * std::sqrt(2 * std::numbers::pi);
  double interior = 0.0, edge = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const double err = std::abs(qf[j] - gaussian_convolution(x, s, alpha));
    if (std::abs(x) <= L / 2) interior = std::max(interior, err);
    edge = std::max(edge, err);
  }
  // Within the support every image sits at least L away.
  EXPECT_LT(interior, std::exp(-L / alpha) / (2 * alpha) * mass);
  // Anywhere in the box the nearest image is at least L/2 away.
  EXPECT_LT(edge, std::exp(-L / (2 * alpha)) / (2 * alpha) * mass);
  EXPECT_GT(edge, 0.0);
}

TEST(Corrupted, FlipsSymbolSign) {
  const Grid g(20.0, 256);
  const NonlocalOperator op(g, Parameters::make(1.0, 0.0, 0.0));
  const NonlocalOperator bad = op.corrupted_for_testing();
  EXPECT_TRUE(bad.corrupted());
  EXPECT_FALSE(op.corrupted());
  const Field one = Field::constant(g, 1.0);
  EXPECT_LT(max_abs_diff(bad.apply_Q(one), Field::constant(g, -1.0)), 1e-14);
}
