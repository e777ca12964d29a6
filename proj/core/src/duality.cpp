#include "qplab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qplab/error.hpp"
#include "qplab/parallel.hpp"
#include "qplab/spectrum.hpp"

namespace qplab {

namespace {

void require_hopping(const TrigPolynomial& v) {
  require(v.degree() >= 1, ErrorKind::Domain, "dual hopping must have degree >= 1");
}

const TrigPolynomial& hopping_of(const CocycleSpec& spec) {
  if (const auto* f = std::get_if<DualFiniteRangeFamily>(&spec.family())) return f->v;
  if (const auto* b = std::get_if<DualBlockFamily>(&spec.family())) return b->v;
  fail(ErrorKind::Domain, "expected a dual cocycle");
}

}  // namespace

SymplecticForm symplectic_form(const TrigPolynomial& v) {
  require_hopping(v);
  const int d = v.degree();
  SymplecticForm f;
  f.d = d;
  f.C = MatC::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = r; c < d; ++c) f.C(r, c) = v.coeff(d + r - c);
  }
  f.S = MatC::Zero(2 * d, 2 * d);
  f.S.topRightCorner(d, d) = -f.C.adjoint();
  f.S.bottomLeftCorner(d, d) = f.C;
  return f;
}

double symplectic_defect(const MatC& M, const SymplecticForm& form) {
  return symplectic_defect(M, form.S);
}

MatC dual_step(const TrigPolynomial& v, const TrigPolynomial& w, cplx E, double theta,
               double eps) {
  require_hopping(v);
  const int d = v.degree();
  const int m = 2 * d;
  const cplx lead = v.coeff(d);
  MatC A = MatC::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    const int k = d - 1 - j;
    const cplx c = (k == 0) ? E - w(theta, eps) - v.coeff(0) : -v.coeff(k);
    A(0, j) = c / lead;
  }
  for (int i = 1; i < m; ++i) A(i, i - 1) = 1.0;
  return A;
}

MatC dual_block_B(const TrigPolynomial& v, const TrigPolynomial& w, double theta, double alpha,
                  double eps) {
  require_hopping(v);
  const int d = v.degree();
  MatC B(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) B(r, c) = v.coeff(r - c);
    B(r, r) += w(theta + (d - 1 - r) * alpha, eps);
  }
  return B;
}

MatC dual_block_step(const TrigPolynomial& v, const TrigPolynomial& w, cplx E, double theta,
                     double alpha, double eps) {
  const SymplecticForm f = symplectic_form(v);
  const int d = f.d;
  const MatC B = dual_block_B(v, w, theta, alpha, eps);
  const auto Cu = f.C.triangularView<Eigen::Upper>();
  MatC top_left = E * MatC::Identity(d, d) - B;
  Cu.solveInPlace(top_left);
  MatC top_right = -f.C.adjoint();
  Cu.solveInPlace(top_right);
  MatC L = MatC::Zero(2 * d, 2 * d);
  L.topLeftCorner(d, d) = top_left;
  L.topRightCorner(d, d) = top_right;
  L.bottomLeftCorner(d, d) = MatC::Identity(d, d);
  return L;
}

DualSpectrumRecord dual_lyapunov(const TrigPolynomial& v, const TrigPolynomial& w,
                                 const Frequency& alpha, double E, long n,
                                 const std::vector<double>& phases, const DualOptions& opts) {
  require_hopping(v);
  const int d = v.degree();
  const CocycleSpec spec = CocycleSpec::dual(alpha, v, w, E);
  const LyapunovEstimate est = lyapunov_spectrum(spec, n, phases, 2 * d, opts.warmup);

  DualSpectrumRecord rec;
  rec.E = E;
  rec.exponents = est.exponents;
  rec.short_run = n < 1000;
  const SymplecticForm form = symplectic_form(v);
  Eigen::JacobiSVD<MatC> svd(form.S);
  const double kappa = svd.singularValues()(0) / svd.singularValues()(2 * d - 1);
  const double bias = (2.0 * std::log(kappa) + 10.0) / static_cast<double>(n);

  for (int j = 1; j <= d; ++j) {
    const int hi = d - j, lo = d + j - 1;
    const double se = est.stderr_[hi] + est.stderr_[lo];
    const double violation = std::abs(est.exponents[hi] + est.exponents[lo]);
    rec.pairing_violation = std::max(rec.pairing_violation, violation);
    require(violation <= 5.0 * se + bias, ErrorKind::NumericalQuality,
            "dual exponents violate the +/- pairing beyond 5 stderr");
    rec.gammas.push_back(0.5 * (est.exponents[hi] - est.exponents[lo]));
    rec.stderr_.push_back(0.5 * se);
  }
  if (d == 1) {
    rec.simple = true;
    rec.decided = true;
  } else {
    rec.gap12 = rec.gammas[1] - rec.gammas[0];
    rec.gap12_stderr = rec.stderr_[0] + rec.stderr_[1];
    rec.simple = rec.gap12 > std::max(opts.simplicity_floor, 6.0 * rec.gap12_stderr);
    rec.decided = rec.simple;
  }
  return rec;
}

DominationVerdict domination_check(const CocycleSpec& spec, int k, const std::vector<long>& n_list,
                                   const std::vector<double>& phases, double rate_floor) {
  const int m = spec.dim();
  require(k >= 1 && k <= m - 1, ErrorKind::Domain, "domination index must lie in [1, m-1]");
  require(!phases.empty(), ErrorKind::InsufficientData, "need at least one phase");
  std::vector<long> ns = n_list;
  require(!ns.empty(), ErrorKind::InsufficientData, "need at least one n");
  std::sort(ns.begin(), ns.end());

  std::vector<std::vector<std::vector<double>>> per_phase(phases.size());
  parallel_for(phases.size(), [&](std::size_t i) {
    per_phase[i] = log_growth_checkpoints(spec, phases[i], ns, k + 1);
  });

  DominationVerdict out;
  for (std::size_t c = 0; c < ns.size(); ++c) {
    double rate = std::numeric_limits<double>::infinity();
    for (const auto& chain : per_phase) {
      rate = std::min(rate, (chain[c][k - 1] - chain[c][k]) / static_cast<double>(ns[c]));
    }
    out.rates.push_back(rate);
  }
  out.growth_rate = out.rates.back();
  const double last = out.rates.back();
  const bool stable =
      out.rates.size() < 2 || std::abs(last - out.rates[out.rates.size() - 2]) <= 0.5 * last;
  if (last > rate_floor && stable) {
    out.state = DominationVerdict::State::Dominated;
  } else if (last <= rate_floor) {
    out.state = DominationVerdict::State::NotDominated;
  }
  out.dominated = out.state == DominationVerdict::State::Dominated;
  return out;
}

std::vector<double> schrodinger_truncation_points(const TrigPolynomial& v, double alpha, int N,
                                                  const std::vector<double>& phases, bool trim) {
  const SpectrumApprox s = truncated_spectrum(SchrodingerOperator{v}, alpha, N, phases);
  return trim ? s.points : s.all_points;
}

std::vector<double> dual_truncation_points(const TrigPolynomial& v, const TrigPolynomial& w,
                                           double alpha, int N, const std::vector<double>& phases,
                                           bool trim) {
  require_hopping(v);
  const SpectrumApprox s = truncated_spectrum(DualOperator{v, w}, alpha, N, phases);
  return trim ? s.points : s.all_points;
}

CrosscheckResult duality_spectrum_crosscheck(const TrigPolynomial& v, double alpha, int N,
                                             const std::vector<double>& phases) {
  CrosscheckResult r;
  r.reliable = N >= 100;
  r.h_points = schrodinger_truncation_points(v, alpha, N, phases, true);
  r.l_points =
      dual_truncation_points(v, TrigPolynomial::cosine(1.0), alpha, N, phases, true);
  r.distance = hausdorff_distance(r.h_points, r.l_points);
  return r;
}

PairingTrace symplectic_pairing(const CocycleSpec& spec, const VecC& u0, const VecC& v0, double x0,
                                long n) {
  const SymplecticForm form = symplectic_form(hopping_of(spec));
  require(u0.size() == spec.dim() && v0.size() == spec.dim(), ErrorKind::Shape,
          "pairing vectors must match the cocycle dimension");
  require(n >= 0, ErrorKind::Domain, "n must be nonnegative");
  require(u0.norm() > 0.0 && v0.norm() > 0.0, ErrorKind::Domain, "pairing vectors must be nonzero");

  const double s_norm = operator_norm(form.S);
  PairingTrace tr;
  VecC u = u0.normalized(), w = v0.normalized();
  double ls = std::log(u0.norm()) + std::log(v0.norm());
  const cplx p_first = u.dot(form.S * w);
  const cplx P0 = p_first * std::exp(ls);
  tr.scaled.push_back(p_first);
  tr.log_scale.push_back(ls);

  MatC A;
  double x = x0;
  const double shift = spec.shift();
  for (long j = 0; j < n; ++j) {
    spec.step(x - std::floor(x), A);
    u = A * u;
    w = A * w;
    const double nu = u.norm(), nw = w.norm();
    u /= nu;
    w /= nw;
    ls += std::log(nu) + std::log(nw);
    x += shift;
    const cplx p = u.dot(form.S * w);
    tr.scaled.push_back(p);
    tr.log_scale.push_back(ls);
    const cplx expected = P0 * std::exp(-ls);
    tr.max_scaled_drift = std::max(tr.max_scaled_drift, std::abs(p - expected) / s_norm);
    if (std::abs(P0) > 0.0) {
      tr.max_relative_drift = std::max(tr.max_relative_drift, std::abs(p / expected - 1.0));
    }
  }
  return tr;
}

}  // namespace qplab
