#include <gtest/gtest.h>

#include <cmath>

#include "qplab/acceleration.hpp"
#include "qplab/error.hpp"

using namespace qplab;

namespace {

EpsilonProfile synthetic(const std::vector<double>& eps, double (*f)(double), double noise = 0.0) {
  EpsilonProfile p;
  p.eps_samples = eps;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    p.L_samples.push_back(f(eps[i]) + (i % 2 ? noise : -noise));
    p.stderrs.push_back(1e-4);
  }
  return p;
}

double turning(double e) { return std::max(0.2, kTwoPi * e - 0.1); }
double slope_two(double e) { return std::max(0.3 + kTwoPi * e, 4.0 * M_PI * e); }

}  // namespace

TEST(Acceleration, DefaultGrid) {
  const auto g = default_eps_grid(1.0);
  ASSERT_EQ(g.size(), 24u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g[1], 0.005, 1e-15);
  EXPECT_NEAR(g.back(), 0.6, 1e-15);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Acceleration, RecoversTurningPoint) {
  auto p = fit_profile(synthetic(default_eps_grid(1.0), turning), 0.1, 1);
  EXPECT_EQ(p.omega, 0);
  EXPECT_EQ(p.omega_bar, 1);
  ASSERT_TRUE(p.eps1.has_value());
  EXPECT_NEAR(*p.eps1, 0.3 / kTwoPi, 1e-6);
  EXPECT_FALSE(p.quantization_failure);
}

TEST(Acceleration, SecondSlopeAfterPositiveAcceleration) {
  auto p = fit_profile(synthetic(default_eps_grid(1.0), slope_two), 0.1, 2);
  EXPECT_EQ(p.omega, 1);
  EXPECT_EQ(p.omega_bar, 1);
  ASSERT_EQ(p.slopes_quantized.size(), 2u);
  EXPECT_EQ(p.slopes_quantized[1], 2);
  EXPECT_NEAR(p.breakpoints[0], 0.3 / kTwoPi, 1e-6);
}

TEST(Acceleration, NonConvexSamplesAreRejected) {
  auto p = synthetic(default_eps_grid(1.0), turning);
  p.L_samples[10] += 0.5;
  try {
    fit_profile(p);
    FAIL() << "expected a data-quality error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DataQuality);
  }
}

TEST(Acceleration, NonIntegerSlopeIsFlagged) {
  auto p = fit_profile(synthetic(default_eps_grid(1.0), [](double e) { return 0.5 * kTwoPi * e; }), 0.1, 1);
  EXPECT_TRUE(p.quantization_failure);
}

TEST(Acceleration, SubcriticalAlmostMathieuTurningPoint) {
  // L_eps = max(0, 2 pi eps + ln lambda): turning point at -ln(lambda) / 2 pi.
  ProfileConfig cfg;
  cfg.n = 5000;
  cfg.phases = 16;
  const auto r = accelerations(TrigPolynomial::cosine(0.5), Frequency::golden(), 0.0, cfg);
  EXPECT_EQ(r.omega, 0);
  EXPECT_EQ(r.omega_bar, 1);
  ASSERT_TRUE(r.eps1.has_value());
  EXPECT_NEAR(*r.eps1, std::log(2.0) / kTwoPi, 0.01);
  EXPECT_TRUE(r.decided);
}

TEST(Acceleration, FreeOperatorHasNoTurningPoint) {
  ProfileConfig cfg;
  cfg.n = 2000;
  cfg.phases = 4;
  const auto r = accelerations(TrigPolynomial::constant(0.0), Frequency::golden(), 0.5, cfg);
  EXPECT_EQ(r.omega_bar, 1);
  EXPECT_FALSE(r.eps1.has_value());
}

TEST(Acceleration, ClassifyEmptySample) {
  const auto v = classify_type1(TrigPolynomial::cosine(2.0), Frequency::golden(), {}, ProfileConfig{});
  EXPECT_TRUE(v.empty_sample);
  EXPECT_TRUE(v.operator_type1);
}
