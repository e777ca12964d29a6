#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "qplab/linalg.hpp"
#include "qplab/parallel.hpp"
#include "qplab/trig_polynomial.hpp"

using namespace qplab;

TEST(TrigPolynomial, MatchesDirectCosines) {
  const auto v = TrigPolynomial::two_cosine(3.0, 0.3);
  for (double x : {0.0, 0.1, 0.37, 0.9}) {
    const double direct = 6.0 * std::cos(kTwoPi * x) + 0.6 * std::cos(2.0 * kTwoPi * x);
    EXPECT_NEAR(v(x).real(), direct, 1e-13);
    EXPECT_NEAR(v(x).imag(), 0.0, 1e-13);
  }
  // 2 lambda cos(2 pi (x + i eps)) = lambda (e^{2 pi i x - 2 pi eps} + e^{-2 pi i x + 2 pi eps}).
  const auto c = TrigPolynomial::cosine(0.5);
  const cplx z(0.2, 0.1);
  EXPECT_NEAR(std::abs(c(0.2, 0.1) - 2.0 * 0.5 * std::cos(kTwoPi * z)), 0.0, 1e-13);
  EXPECT_EQ(c.degree(), 1);
  EXPECT_TRUE(TrigPolynomial::constant(0.0).is_constant());
}

TEST(TrigPolynomial, OrbitEvaluatorTracksDirectEvaluation) {
  const auto v = TrigPolynomial::two_cosine(1.0, 0.4);
  const double alpha = 0.6180339887498949, x0 = 0.123, eps = 0.05;
  OrbitEvaluator orbit(v, x0, alpha, eps);
  double worst = 0.0;
  for (int j = 0; j < 20000; ++j, orbit.advance()) {
    const long double x = x0 + static_cast<long double>(j) * alpha;
    const double xr = static_cast<double>(x - std::floor(x));
    worst = std::max(worst, std::abs(orbit.value() - v(xr, eps)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Linalg, BandedEigenvaluesMatchDense) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int bw : {1, 2, 3}) {
    BandedHermitian h(40, bw);
    for (int k = 0; k <= bw; ++k) {
      for (auto& x : h.lower[k]) x = k == 0 ? cplx(g(rng), 0.0) : cplx(g(rng), bw > 1 ? g(rng) : 0.0);
    }
    const auto es = eigh_banded(h, true);
    Eigen::SelfAdjointEigenSolver<MatC> ref(h.dense());
    for (int i = 0; i < 40; ++i) EXPECT_NEAR(es.values[i], ref.eigenvalues()(i), 1e-11);
    const MatC H = h.dense();
    for (int j = 0; j < 40; ++j) {
      EXPECT_LT((H * es.vectors.col(j) - es.values[j] * es.vectors.col(j)).norm(), 1e-10);
    }
  }
}

TEST(Linalg, TridiagonalFreeLaplacian) {
  const int n = 50;
  const auto ev = eigvalsh_tridiagonal(std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1.0));
  for (int k = 1; k <= n; ++k) {
    const double exact = 2.0 * std::cos(M_PI * k / (n + 1));
    EXPECT_NEAR(ev[n - k], exact, 1e-12);
  }
}

TEST(Linalg, HausdorffAndNearest) {
  EXPECT_DOUBLE_EQ(hausdorff_distance({0.0, 1.0}, {0.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance({0.0, 1.0}, {0.0, 1.5}), 0.5);
  EXPECT_DOUBLE_EQ(hausdorff_distance({0.0}, {0.0, 3.0}), 3.0);
  EXPECT_DOUBLE_EQ(distance_to_sorted({-1.0, 2.0, 5.0}, 3.0), 1.0);
}

TEST(Linalg, OperatorNormIsLargestSingularValue) {
  MatC m(2, 2);
  m << 3.0, 0.0, 0.0, -4.0;
  EXPECT_NEAR(operator_norm(m), 4.0, 1e-14);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> a(1000), b(1000);
  auto body = [](std::vector<double>& out) {
    return [&out](std::size_t i) { out[i] = std::sin(static_cast<double>(i)) * 3.0; };
  };
  set_thread_count(1);
  parallel_for(a.size(), body(a));
  set_thread_count(4);
  parallel_for(b.size(), body(b));
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(Parallel, PropagatesExceptions) {
  set_thread_count(3);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  set_thread_count(0);
}
