#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "qplab/cocycles.hpp"
#include "qplab/duality.hpp"
#include "qplab/error.hpp"

using namespace qplab;

namespace {

const Frequency kGolden = Frequency::golden();

}  // namespace

TEST(Cocycles, ConstantCocycleGivesLogEigenvalueModuli) {
  MatC M(2, 2);
  M << 2.0, 1.0, 1.0, 1.0;  // eigenvalues (3 +- sqrt 5)/2
  const auto est = lyapunov_spectrum(CocycleSpec::constant(kGolden, M), 2000, phase_lattice(0.0, 2), 2);
  EXPECT_NEAR(est.exponents[0], std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-10);
  EXPECT_NEAR(est.exponents[1], std::log((3.0 - std::sqrt(5.0)) / 2.0), 1e-10);
}

TEST(Cocycles, AlmostMathieuComplexifiedLaw) {
  // For 2 lambda cos with lambda = 2 and E inside the spectrum,
  // L_eps = ln lambda + 2 pi eps.
  const auto v = TrigPolynomial::cosine(2.0);
  for (double eps : {0.0, 0.5, 1.0 - 1e-9}) {
    const auto spec = CocycleSpec::schrodinger(kGolden, v, 0.0, std::min(eps, 0.99));
    const auto est = lyapunov_spectrum(spec, 10000, phase_lattice(0.0, 16), 1);
    EXPECT_NEAR(est.exponents[0], std::log(2.0) + kTwoPi * std::min(eps, 0.99), 0.02);
  }
}

TEST(Cocycles, SchrodingerExponentsSumToZero) {
  const auto spec = CocycleSpec::schrodinger(kGolden, TrigPolynomial::cosine(1.3), 0.4);
  const auto est = lyapunov_spectrum(spec, 5000, phase_lattice(0.0, 4), 2);
  EXPECT_NEAR(est.exponents[0] + est.exponents[1], 0.0, 1e-10);
}

TEST(Cocycles, IterateIsOrderedProduct) {
  const auto spec = CocycleSpec::schrodinger(kGolden, TrigPolynomial::cosine(0.7), 0.3, 0.05);
  const double x = 0.21;
  MatC P = MatC::Identity(2, 2);
  for (int j = 0; j < 7; ++j) P = spec.step(x + j * kGolden.value_d()) * P;
  EXPECT_LT((iterate(spec, x, 7) - P).norm(), 1e-12);
  EXPECT_LT((iterate(spec, x, -7) * iterate(spec, x - 7 * kGolden.value_d(), 7) -
             MatC::Identity(2, 2))
                .norm(),
            1e-9);
}

TEST(Cocycles, StepInverse) {
  const auto v = TrigPolynomial::two_cosine(3.0, 0.3);
  for (const auto& spec : {CocycleSpec::schrodinger(kGolden, v, 0.5, 0.1),
                           CocycleSpec::dual(kGolden, v, TrigPolynomial::cosine(1.0), 0.5, 0.1)}) {
    MatC inv;
    spec.step_inverse(0.3, inv);
    EXPECT_LT((inv * spec.step(0.3) - MatC::Identity(spec.dim(), spec.dim())).norm(), 1e-12);
  }
}

TEST(Cocycles, StripIsEnforced) {
  EXPECT_THROW(CocycleSpec::schrodinger(kGolden, TrigPolynomial::cosine(1.0, 0.5), 0.0, 0.6), Error);
}

TEST(Cocycles, OverflowIsANumericalQualityError) {
  const auto spec = CocycleSpec::schrodinger(kGolden, TrigPolynomial::cosine(1e308), 0.0);
  try {
    lyapunov_spectrum(spec, 100, phase_lattice(0.0, 1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericalQuality);
  }
}

TEST(Cocycles, ShortRunIsFlagged) {
  const auto spec = CocycleSpec::schrodinger(kGolden, TrigPolynomial::cosine(1.0), 0.0);
  EXPECT_TRUE(lyapunov_spectrum(spec, 50, phase_lattice(0.0, 2), 1).short_run);
  EXPECT_FALSE(lyapunov_spectrum(spec, 500, phase_lattice(0.0, 2), 1).short_run);
}

TEST(Duality, DualStepsAreSymplectic) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0), e(-4.0, 4.0);
  const auto v = TrigPolynomial::two_cosine(3.0, 0.3);
  const auto form = symplectic_form(v);
  const auto w = TrigPolynomial::cosine(1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    worst = std::max(worst, symplectic_defect(dual_step(v, w, e(rng), u(rng)), form));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Duality, BlockStepIsProductOfSteps) {
  const auto v = TrigPolynomial::two_cosine(3.0, 0.3);
  const auto w = TrigPolynomial::cosine(1.0);
  const double a = kGolden.value_d(), theta = 0.17;
  const cplx E(0.5, 0.0);
  MatC P = MatC::Identity(4, 4);
  for (int j = 0; j < 2; ++j) P = dual_step(v, w, E, theta + j * a) * P;
  const MatC B = dual_block_step(v, w, E, theta, a);
  EXPECT_LT((P - B).norm() / P.norm(), 1e-12);
}

TEST(Duality, PairingIsConserved) {
  const auto v = TrigPolynomial::two_cosine(3.0, 0.3);
  const auto spec = CocycleSpec::dual(kGolden, v, TrigPolynomial::cosine(1.0), 0.5);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  VecC a(4), b(4);
  for (int i = 0; i < 4; ++i) {
    a(i) = cplx(g(rng), g(rng));
    b(i) = cplx(g(rng), g(rng));
  }
  const auto tr = symplectic_pairing(spec, a, b, 0.1, 1000);
  EXPECT_LT(tr.max_scaled_drift, 1e-8);
}

TEST(Duality, ExtendedHarperDualSpectrum) {
  const auto rec = dual_lyapunov(TrigPolynomial::two_cosine(3.0, 0.3), TrigPolynomial::cosine(1.0),
                                 kGolden, 0.5, 5000, phase_lattice(0.0, 8));
  ASSERT_EQ(rec.gammas.size(), 2u);
  EXPECT_NEAR(rec.gammas[0], 0.0, 0.01);
  EXPECT_GT(rec.gammas[1], 1.0);
  EXPECT_TRUE(rec.simple);
  EXPECT_TRUE(rec.decided);
  EXPECT_LT(rec.pairing_violation, 1e-6);
}

TEST(Duality, DominationAtNeighbouringIndices) {
  const auto spec = CocycleSpec::dual(kGolden, TrigPolynomial::two_cosine(3.0, 0.3),
                                      TrigPolynomial::cosine(1.0), 0.5);
  for (int k : {1, 3}) {
    const auto dv = domination_check(spec, k, {1000, 2000, 4000}, phase_lattice(0.0, 8));
    EXPECT_TRUE(dv.dominated) << "k=" << k;
  }
  // The centre is not dominated: the middle exponents coincide.
  const auto centre = domination_check(spec, 2, {1000, 2000, 4000}, phase_lattice(0.0, 8));
  EXPECT_FALSE(centre.dominated);
}

TEST(Duality, AubryCrosscheck) {
  const auto r = duality_spectrum_crosscheck(TrigPolynomial::cosine(2.0), kGolden.value_d(), 200,
                                             phase_lattice(0.0, 4));
  EXPECT_TRUE(r.reliable);
  EXPECT_LT(r.distance, 0.08);
}
