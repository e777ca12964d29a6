#include "qplab/kotani.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "qplab/error.hpp"
#include "qplab/parallel.hpp"

namespace qplab {

namespace {

double wrap(long double x) {
  long double f = x - std::floor(x);
  return static_cast<double>(f);
}

cplx backward_m(const TrigPolynomial& v, double alpha, cplx z, double x, long n, cplx seed) {
  cplx m = seed;
  for (long j = n - 1; j >= 0; --j) {
    const double xj = wrap(static_cast<long double>(x) + static_cast<long double>(j) * alpha);
    m = 1.0 / (z - v(xj) - m);
  }
  return m;
}

cplx forward_m(const TrigPolynomial& v, double alpha, cplx z, double x, long n, cplx seed) {
  cplx m = seed;
  for (long j = n; j >= 1; --j) {
    const double xj = wrap(static_cast<long double>(x) - static_cast<long double>(j) * alpha);
    m = 1.0 / (z - v(xj) - m);
  }
  return m;
}

MatC random_frame(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  MatC X(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) X(r, c) = cplx(g(rng), g(rng));
  }
  return X;
}

MatC thin_q(const MatC& X) {
  Eigen::HouseholderQR<MatC> qr(X);
  return qr.householderQ() * MatC::Identity(X.rows(), X.cols());
}

// Block recurrence C U_{j+1} + (B_j - z) U_j + C^* U_{j-1} = 0 with
// B_j = B(theta + j d alpha).
class BlockChain {
 public:
  BlockChain(const TrigPolynomial& v, const TrigPolynomial& w, double alpha, cplx z, double theta)
      : v_(v), w_(w), alpha_(alpha), z_(z), theta_(theta) {
    const auto form = symplectic_form(v);
    d_ = form.d;
    C_ = form.C;
    Cs_ = C_.adjoint();
    C_lu_.compute(C_);
    Cs_lu_.compute(Cs_);
  }

  int d() const { return d_; }
  const MatC& C() const { return C_; }

  MatC B(long j) const {
    const double t =
        wrap(static_cast<long double>(theta_) + static_cast<long double>(j) * d_ * alpha_);
    return dual_block_B(v_, w_, t, alpha_);
  }

  MatC zB(long j) const {
    MatC m = -B(j);
    m.diagonal().array() += z_;
    return m;
  }

  // (U_j; U_{j-1}) -> (U_{j+1}; U_j).
  MatC forward(const MatC& X, long j) const {
    MatC Y(X.rows(), X.cols());
    const auto U = X.topRows(d_);
    const auto Um = X.bottomRows(d_);
    Y.topRows(d_) = C_lu_.solve(zB(j) * U - Cs_ * Um);
    Y.bottomRows(d_) = U;
    return Y;
  }

  // (U_j; U_{j-1}) -> (U_{j-1}; U_{j-2}).
  MatC backward(const MatC& X, long j) const {
    MatC Y(X.rows(), X.cols());
    const auto U = X.topRows(d_);
    const auto Um = X.bottomRows(d_);
    Y.topRows(d_) = Um;
    Y.bottomRows(d_) = Cs_lu_.solve(zB(j - 1) * Um - C_ * U);
    return Y;
  }

  // Frame at block 0 after backward iteration from block n.
  MatC backward_frame(long n, int cols, std::uint64_t seed) const {
    MatC X = thin_q(random_frame(2 * d_, cols, seed));
    for (long j = n; j > 0; --j) X = thin_q(backward(X, j));
    return X;
  }

  // Frame at block 0 after forward iteration from block -n.
  MatC forward_frame(long n, int cols, std::uint64_t seed) const {
    MatC X = thin_q(random_frame(2 * d_, cols, seed));
    for (long j = -n; j < 0; ++j) X = thin_q(forward(X, j));
    return X;
  }

 private:
  const TrigPolynomial& v_;
  const TrigPolynomial& w_;
  double alpha_;
  cplx z_;
  double theta_;
  int d_ = 0;
  MatC C_, Cs_;
  Eigen::PartialPivLU<MatC> C_lu_, Cs_lu_;
};

double subspace_distance(const MatC& A, const MatC& B) {
  return operator_norm(A * A.adjoint() - B * B.adjoint());
}

double condition(const MatC& M) {
  Eigen::JacobiSVD<MatC> svd(M);
  const auto& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

constexpr std::uint64_t kSeedA = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSeedB = 0xd1b54a32d192ed03ULL;
constexpr int kTailDoublings = 4;

// Converged frame: two seeds agree, tail doubled until they do.
MatC settled_frame(const BlockChain& chain, bool backward, int cols, const RiccatiOptions& opts,
                   double* delta) {
  long n = std::max<long>(1, opts.n_tail);
  double last = 0.0;
  for (int attempt = 0; attempt <= kTailDoublings; ++attempt, n *= 2) {
    const MatC a = backward ? chain.backward_frame(n, cols, kSeedA)
                            : chain.forward_frame(n, cols, kSeedA);
    const MatC b = backward ? chain.backward_frame(n, cols, kSeedB)
                            : chain.forward_frame(n, cols, kSeedB);
    last = subspace_distance(a, b);
    if (last <= opts.frame_tol) {
      if (delta) *delta = std::max(*delta, last);
      return a;
    }
  }
  fail(ErrorKind::Convergence,
       "invariant frame did not settle; last two-seed discrepancy " + std::to_string(last));
}

// Unit vector spanning the intersection of span(A) and span(B).
VecC intersection(const MatC& A, const MatC& B) {
  MatC K(A.rows(), A.cols() + B.cols());
  K << A, -B;
  Eigen::JacobiSVD<MatC> svd(K, Eigen::ComputeFullV);
  const VecC coeff = svd.matrixV().col(K.cols() - 1);
  VecC u = A * coeff.head(A.cols());
  return u / u.norm();
}

MatC ratio(const MatC& num, const MatC& den, double max_condition, const char* what) {
  const double c = condition(den);
  if (!(c <= max_condition)) {
    fail(ErrorKind::Conditioning,
         std::string(what) + " frame is ill-conditioned (cond " + std::to_string(c) + ")");
  }
  return num * den.inverse();
}

MatC m_plus_from(const BlockChain& chain, const MatC& frame, double max_condition) {
  const int d = chain.d();
  const MatC U1 = chain.forward(frame, 0).topRows(d);
  return ratio(U1, frame.topRows(d), max_condition, "stable");
}

MatC m_minus_from(const BlockChain& chain, const MatC& frame, double max_condition) {
  const int d = chain.d();
  return ratio(frame.bottomRows(d), frame.topRows(d), max_condition, "unstable");
}

}  // namespace

ScalarM m_schrodinger(const TrigPolynomial& v, double alpha, cplx z, double x, long n_tail,
                      double tol) {
  require(z.imag() >= 1e-6, ErrorKind::Domain, "m-functions need Im z >= 1e-6");
  require(n_tail >= 1, ErrorKind::Domain, "n_tail must be positive");
  ScalarM r;
  r.n_tail = n_tail;
  const cplx s0(0.0, 0.0), s1(0.0, 1.0);
  r.m_plus = backward_m(v, alpha, z, x, n_tail, s0);
  r.delta_plus = std::abs(r.m_plus - backward_m(v, alpha, z, x, n_tail, s1));
  r.m_minus = forward_m(v, alpha, z, x, n_tail, s0);
  r.delta_minus = std::abs(r.m_minus - forward_m(v, alpha, z, x, n_tail, s1));
  const double worst = std::max(r.delta_plus / std::max(1.0, std::abs(r.m_plus)),
                                r.delta_minus / std::max(1.0, std::abs(r.m_minus)));
  if (worst > tol) {
    fail(ErrorKind::Convergence,
         "m-function tail did not converge; last delta " + std::to_string(worst));
  }
  return r;
}

cplx green_schrodinger(const TrigPolynomial& v, double alpha, cplx z, double x, long n_tail) {
  const ScalarM here = m_schrodinger(v, alpha, z, x, n_tail);
  const ScalarM next = m_schrodinger(v, alpha, z, wrap(static_cast<long double>(x) + alpha), n_tail);
  return 1.0 / (next.m_plus + here.m_minus + v(x) - z);
}

MState riccati_M(const TrigPolynomial& v, const TrigPolynomial& w, double alpha, cplx z,
                 double theta, const RiccatiOptions& opts) {
  require(z.imag() > 0.0, ErrorKind::Domain, "Riccati data need Im z > 0");
  // Below this the stable and unstable frames merge numerically.
  require(z.imag() >= 1e-6, ErrorKind::Conditioning, "Im z too small, hyperbolicity degenerates");
  const BlockChain chain(v, w, alpha, z, theta);
  const int d = chain.d();

  MState s;
  s.z = z;
  s.theta = theta;
  s.d = d;
  s.C = chain.C();
  s.B = chain.B(0);

  const MatC stable = settled_frame(chain, true, d, opts, &s.frame_delta);
  const MatC unstable = settled_frame(chain, false, d, opts, &s.frame_delta);
  s.M_plus = m_plus_from(chain, stable, opts.max_condition);
  s.M_minus = m_minus_from(chain, unstable, opts.max_condition);

  MatC K = s.C * s.M_plus + s.C.adjoint() * s.M_minus + s.B;
  K.diagonal().array() -= z;
  s.green = K.inverse();

  // Stable frame reordered: fastest decaying directions first, then the
  // stable solution lying in the forward (d+1)-dominant subspace.
  s.stable_frame = stable;
  if (d >= 2) {
    const MatC dominant = settled_frame(chain, false, d + 1, opts, &s.frame_delta);
    s.stable_frame.col(d - 1) = intersection(stable, dominant);
  }
  s.frame_condition = condition(s.stable_frame.topRows(d));
  if (!(s.frame_condition <= opts.max_condition)) {
    fail(ErrorKind::Conditioning,
         "F+(0) is ill-conditioned (cond " + std::to_string(s.frame_condition) + ")");
  }
  if (d == 1) {
    s.m_scalar_plus = s.M_plus(0, 0);
    s.m_scalar_minus = s.M_minus(0, 0);
  }

  if (opts.with_residuals) {
    const double back = wrap(static_cast<long double>(theta) - static_cast<long double>(d) * alpha);
    const double fwd = wrap(static_cast<long double>(theta) + static_cast<long double>(d) * alpha);
    const BlockChain chain_b(v, w, alpha, z, back);
    const BlockChain chain_f(v, w, alpha, z, fwd);
    double ignored = 0.0;
    const MatC Mp_back =
        m_plus_from(chain_b, settled_frame(chain_b, true, d, opts, &ignored), opts.max_condition);
    const MatC Mm_fwd =
        m_minus_from(chain_f, settled_frame(chain_f, false, d, opts, &ignored), opts.max_condition);
    MatC R1 = s.C * s.M_plus + s.C.adjoint() * Mp_back.inverse() + s.B;
    R1.diagonal().array() -= z;
    MatC R2 = s.C.adjoint() * s.M_minus + s.C * Mm_fwd.inverse() + s.B;
    R2.diagonal().array() -= z;
    s.riccati_residual_plus = operator_norm(R1);
    s.riccati_residual_minus = operator_norm(R2);
  }
  return s;
}

GreenIdentityReport green_identities_check(const MState& state, const MState& shifted,
                                           double alpha) {
  require(state.d == shifted.d && state.d >= 1, ErrorKind::Shape, "states have different d");
  GreenIdentityReport r;
  const double expected =
      wrap(static_cast<long double>(state.theta) - static_cast<long double>(state.d) * alpha);
  r.chain_consistent = dist_to_int(static_cast<long double>(shifted.theta) - expected) < 1e-12 &&
                       std::abs(state.z - shifted.z) < 1e-14;
  const MatC& C = state.C;
  const MatC Cs = C.adjoint();
  const MatC Mp_back_inv = shifted.M_plus.inverse();
  const MatC I = MatC::Identity(state.d, state.d);

  const MatC g1 = (-Cs * Mp_back_inv + Cs * state.M_minus).inverse();
  const MatC g2 = (C * shifted.M_plus - C * state.M_minus.inverse()).inverse();
  const MatC lhs3 = state.green * Cs * Mp_back_inv;
  const MatC rhs3 = shifted.M_plus * shifted.green * C - I;
  r.first = operator_norm(state.green - g1);
  r.second = operator_norm(shifted.green - g2);
  r.third = operator_norm(lhs3 - rhs3);
  r.max_deviation = std::max({r.first, r.second, r.third});
  return r;
}

cplx kotani_g(const MState& state) {
  const int d = state.d;
  const MatC F = state.stable_frame.topRows(d);
  const MatC X = F.partialPivLu().solve(state.green * F);
  return X(d - 1, d - 1);
}

JohnsonMoserReport johnson_moser_residual(const TrigPolynomial& v, const TrigPolynomial& w,
                                          const Frequency& alpha, cplx z, double d_eps, long n,
                                          std::size_t phases, const RiccatiOptions& opts) {
  require(d_eps > 0.0 && d_eps < z.imag(), ErrorKind::Domain, "need 0 < d_eps < Im z");
  require(phases >= 1, ErrorKind::InsufficientData, "need at least one phase");
  const int d = symplectic_form(v).d;
  const auto grid = phase_lattice(0.0, phases);
  auto Ld = [&](cplx zz) {
    const auto spec = CocycleSpec::dual(alpha, v, w, zz);
    return lyapunov_spectrum(spec, n, grid, d).exponents[d - 1];
  };
  JohnsonMoserReport r;
  const cplx h(0.0, d_eps);
  r.lhs = (Ld(z + h) - Ld(z - h)) / (2.0 * d_eps);
  r.L_at_z = Ld(z);

  std::vector<cplx> g(phases);
  parallel_for(phases, [&](std::size_t p) {
    RiccatiOptions o = opts;
    o.with_residuals = false;
    g[p] = kotani_g(riccati_M(v, w, alpha.value_d(), z, grid[p], o));
  });
  cplx mean = 0.0;
  for (const auto& x : g) mean += x;
  mean /= static_cast<double>(phases);
  r.rhs = mean.imag() / d;
  r.residual = std::abs(std::abs(r.lhs) - std::abs(r.rhs));
  return r;
}

namespace {

ReflectionlessPoint summarize(double E, double delta, std::vector<double> vals) {
  ReflectionlessPoint p;
  p.E = E;
  p.delta = delta;
  std::sort(vals.begin(), vals.end());
  const std::size_t m = vals.size();
  p.median = m % 2 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
  for (double x : vals) p.mean += x;
  p.mean /= static_cast<double>(m);
  p.max = vals.back();
  return p;
}

}  // namespace

std::vector<ReflectionlessPoint> reflectionless_residual(const TrigPolynomial& v, double alpha,
                                                         const std::vector<double>& energies,
                                                         const std::vector<double>& deltas,
                                                         const std::vector<double>& phases) {
  require(!phases.empty(), ErrorKind::InsufficientData, "need at least one phase");
  std::vector<ReflectionlessPoint> out(energies.size() * deltas.size());
  parallel_for(out.size(), [&](std::size_t idx) {
    const double E = energies[idx / deltas.size()];
    const double delta = deltas[idx % deltas.size()];
    require(delta >= 1e-6, ErrorKind::Domain, "delta must be at least 1e-6");
    const long n_tail = std::max<long>(2000, static_cast<long>(std::ceil(60.0 / delta)));
    std::vector<double> vals(phases.size());
    for (std::size_t p = 0; p < phases.size(); ++p) {
      const ScalarM m = m_schrodinger(v, alpha, cplx(E, delta), phases[p], n_tail);
      vals[p] = std::abs(m.m_plus - 1.0 / std::conj(m.m_minus));
    }
    out[idx] = summarize(E, delta, std::move(vals));
  });
  return out;
}

std::vector<ReflectionlessPoint> reflectionless_residual_dual(
    const TrigPolynomial& v, const TrigPolynomial& w, double alpha,
    const std::vector<double>& energies, const std::vector<double>& deltas,
    const std::vector<double>& phases, long n_tail) {
  require(!phases.empty(), ErrorKind::InsufficientData, "need at least one phase");
  RiccatiOptions opts;
  opts.n_tail = n_tail;
  std::vector<ReflectionlessPoint> out(energies.size() * deltas.size());
  parallel_for(out.size(), [&](std::size_t idx) {
    const double E = energies[idx / deltas.size()];
    const double delta = deltas[idx % deltas.size()];
    require(delta >= 1e-6, ErrorKind::Domain, "delta must be at least 1e-6");
    std::vector<double> vals(phases.size());
    for (std::size_t p = 0; p < phases.size(); ++p) {
      const BlockChain real(v, w, alpha, cplx(E, 0.0), phases[p]);
      const int d = real.d();
      MatC centre = MatC::Identity(2 * d, 2);
      if (d >= 2) {
        const MatC fwd = real.forward_frame(n_tail, d + 1, kSeedA);
        const MatC bwd = real.backward_frame(n_tail, d + 1, kSeedA);
        MatC K(2 * d, 2 * d + 2);
        K << fwd, -bwd;
        Eigen::JacobiSVD<MatC> svd(K, Eigen::ComputeFullV);
        const MatC coeff = svd.matrixV().rightCols(2).topRows(d + 1);
        centre = thin_q(fwd * coeff);
      } else {
        centre.col(0) = VecC::Unit(2, 0);
        centre.col(1) = VecC::Unit(2, 1);
      }
      const BlockChain chain(v, w, alpha, cplx(E, delta), phases[p]);
      double ignored = 0.0;
      const MatC stable = settled_frame(chain, true, d, opts, &ignored);
      const MatC unstable = settled_frame(chain, false, d, opts, &ignored);
      VecC up = stable.col(d - 1), um = unstable.col(d - 1);
      if (d >= 2) {
        up = intersection(stable, settled_frame(chain, false, d + 1, opts, &ignored));
        um = intersection(unstable, settled_frame(chain, true, d + 1, opts, &ignored));
      }
      const auto ls = centre.colPivHouseholderQr();
      const VecC a = ls.solve(up);
      const VecC b = ls.solve(um);
      const cplx mp = a(0) / a(1);
      const cplx mm = b(1) / b(0);
      vals[p] = std::abs(mp - 1.0 / std::conj(mm));
    }
    out[idx] = summarize(E, delta, std::move(vals));
  });
  return out;
}

}  // namespace qplab
