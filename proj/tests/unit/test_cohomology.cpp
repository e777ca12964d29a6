#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "qplab/cohomology.hpp"
#include "qplab/error.hpp"

using namespace qplab;

namespace {

Eigen::Matrix2d rot(double t) {
  const double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

}  // namespace

TEST(Cohomology, StripNormAndEvaluation) {
  const auto c = AnalyticObservable::cosine(1.0, 0.5);
  EXPECT_NEAR(c.strip_norm(0.25), 2.0 * std::exp(kTwoPi * 0.25), 1e-12);
  EXPECT_NEAR(c(0.1).real(), 2.0 * std::cos(kTwoPi * 0.1), 1e-14);
  const auto g = AnalyticObservable::geometric(0.6, 0.5);
  // Tail beyond J is below the tolerance: compare with the closed-form series.
  const double r = std::exp(-kTwoPi * 0.1);
  EXPECT_NEAR(g.strip_norm(0.5), 2.0 * r / (1.0 - r), 1e-11);
}

TEST(Cohomology, FullSolutionSingleMode) {
  const auto alpha = Frequency::golden();
  const auto sol = solve_full(AnalyticObservable::cosine(1.0, 0.5), alpha, 0.25);
  const double a = alpha.value_d();
  const cplx expected = 1.0 / (std::exp(cplx(0.0, kTwoPi * a)) - 1.0);
  EXPECT_LT(std::abs(sol.phi.coeff(1) - expected), 1e-14);
  EXPECT_LT(std::abs(sol.phi.coeff(-1) - std::conj(expected)), 1e-14);
  for (double x : {0.0, 0.3, 0.77}) {
    const cplx lhs = sol.phi(x + a) - sol.phi(x);
    EXPECT_LT(std::abs(lhs - 2.0 * std::cos(kTwoPi * x)), 1e-12);
  }
}

TEST(Cohomology, FullSolutionErrors) {
  try {
    solve_full(AnalyticObservable({0.3, 1.0}, 0.5), Frequency::golden(), 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  try {
    // The fixture continues with a golden tail, so only its defining window
    // carries the Liouville growth.
    solve_full(AnalyticObservable::geometric(0.6, 0.5), make_liouville(1.0, 4).alpha, 0.25, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Regime);
  }
}

TEST(Cohomology, GeometricFullSolutionByDirectSummation) {
  const auto alpha = Frequency::golden();
  const auto psi = AnalyticObservable::geometric(0.6, 0.5);
  const auto sol = solve_full(psi, alpha, 0.25);
  EXPECT_TRUE(std::isfinite(sol.norm_out));
  for (int j = 1; j <= psi.modes(); ++j) {
    const cplx d = std::exp(cplx(0.0, kTwoPi * j * alpha.value_d())) - 1.0;
    EXPECT_LT(std::abs(sol.phi.coeff(j) * d - psi.coeff(j)), 1e-12 * std::max(1.0, std::abs(psi.coeff(j)) * j));
  }
}

TEST(Cohomology, TruncatedBoundsOnLiouvilleFixture) {
  const auto L = make_liouville(1.0, 4);
  const auto psi = AnalyticObservable::geometric(0.6, 0.5);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto sol = solve_truncated(psi, L.alpha, L.cf, k, 0.5);
    const auto& r = sol.report;
    EXPECT_TRUE(r.g_bound_holds) << k;
    EXPECT_TRUE(r.residual_bound_holds) << k;
    EXPECT_LE(r.identity_error, 1e-14);
    EXPECT_TRUE(r.divisor_floor_holds);
    // Direct tail summation of the dropped modes at h/2.
    double tail = 0.0;
    for (int j = static_cast<int>(std::min<long>(r.N, psi.modes())) + 1; j <= psi.modes(); ++j) {
      tail += 2.0 * std::abs(psi.coeff(j)) * std::exp(kTwoPi * j * 0.25);
    }
    EXPECT_NEAR(r.residual_norm, tail, 1e-15 + 1e-12 * tail);
  }
  EXPECT_TRUE(solve_truncated(psi, L.alpha, L.cf, 3, 0.5).report.regime_applies);
  EXPECT_THROW(solve_truncated(psi, L.alpha, L.cf, 4, 0.5), Error);
}

TEST(Cohomology, FullRetentionHasZeroResidual) {
  const auto cf = cf_expand(Frequency::golden(), 20);
  const auto sol = solve_truncated(AnalyticObservable::cosine(1.0, 0.5), Frequency::golden(), cf, 6, 0.5);
  EXPECT_GE(sol.report.N, 1);
  EXPECT_EQ(sol.report.residual_norm, 0.0);
}

TEST(Cohomology, ConjugationMatchesRotationProduct) {
  const auto alpha = Frequency::golden();
  const auto cf = cf_expand(alpha, 20);
  const auto psi = AnalyticObservable::geometric(0.6, 0.5);
  const auto sol = solve_truncated(psi, alpha, cf, 6, 0.5);
  const auto conj = rotations_conjugate(RotationsCocycle{psi}, alpha, sol.g);
  for (int j = 0; j <= psi.modes(); ++j) {
    EXPECT_LT(std::abs(conj.epsilon.coeff(j) - sol.residual.coeff(j)), 1e-15);
  }
  const double a = alpha.value_d();
  for (double x : {0.05, 0.4, 0.8}) {
    const Eigen::Matrix2d M = rot(sol.g(x + a).real()).transpose() * rot(psi(x).real()) * rot(sol.g(x).real());
    EXPECT_LT((M - rot(conj.epsilon(x).real())).norm(), 1e-12);
  }
  const auto none = rotations_conjugate(RotationsCocycle{psi}, alpha, AnalyticObservable({0.0}, 0.5));
  for (int j = 0; j <= psi.modes(); ++j) EXPECT_EQ(none.epsilon.coeff(j), psi.coeff(j));
}

TEST(Cohomology, SmallDivisorIsAccurate) {
  const auto L = make_liouville(1.0, 4);
  for (int j : {1, 57, 114}) {
    const long double t = j * L.alpha.value();
    const long double f = t - std::nearbyint(t);
    const cplx direct(std::cos(kTwoPi * static_cast<double>(f)) - 1.0, std::sin(kTwoPi * static_cast<double>(f)));
    EXPECT_LT(std::abs(small_divisor(j, L.alpha) - direct), 1e-15 + 1e-10 * std::abs(direct));
  }
}
