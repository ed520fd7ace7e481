#include <gtest/gtest.h>

#include "mdcnet/quadrature.hpp"

using namespace mdcnet;

TEST(Quadrature, Polynomial) {
  auto r = integrate([](double x) { return 3 * x * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 8.0, 1e-12);
}

TEST(Quadrature, SmoothTranscendental) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, 5.0).value, 1.0 - std::exp(-5.0), 1e-12);
  // endpoint singularity in the derivative: converges, but only to a looser tolerance
  EXPECT_NEAR(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-6, 1e-6, 18}).value, 2.0 / 3.0, 1e-6);
}

TEST(Quadrature, EmptyInterval) { EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0); }

TEST(Quadrature, ThrowsWhenUnresolved) {
  QuadTolerance tight{1e-300, 1e-300, 2};
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / (x + 1e-6)); }, 0.0, 1.0, tight), Error);
}

TEST(Quadrature, PeriodicTrapezoidIsSpectral) {
  // int_0^{2pi} exp(cos t) dt = 2 pi I_0(1)
  double v = periodic_trapezoid([](double t) { return std::exp(std::cos(t)); }, 0.0, 2 * std::numbers::pi, 32);
  EXPECT_NEAR(v, 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0), 1e-13);
}

TEST(Quadrature, HalvingToleranceStable) {
  auto f = [](double x) { return 1.0 / (1.0 + x * x * x * x); };
  double a = integrate(f, 0.0, 50.0, {1e-10, 1e-8, 18}).value;
  double b = integrate(f, 0.0, 50.0, {5e-11, 5e-9, 18}).value;
  EXPECT_NEAR(a, b, 1e-8 * std::abs(b));
}
