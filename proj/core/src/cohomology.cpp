#include "qplab/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qplab/error.hpp"

namespace qplab {

AnalyticObservable::AnalyticObservable(std::vector<cplx> coeffs_nonneg, double h)
    : coeffs_(std::move(coeffs_nonneg)), h_(h) {
  require(!coeffs_.empty(), ErrorKind::Domain, "observable needs at least the mean");
  require(h >= 0.0 && std::isfinite(h), ErrorKind::Domain, "strip must be nonnegative");
  coeffs_[0] = cplx(coeffs_[0].real(), 0.0);
}

AnalyticObservable AnalyticObservable::cosine(double amplitude, double h) {
  return AnalyticObservable({0.0, amplitude}, h);
}

AnalyticObservable AnalyticObservable::geometric(double rate, double h, double tail_tol) {
  require(rate > h && h >= 0.0, ErrorKind::Domain, "geometric decay rate must exceed the strip");
  const double r = std::exp(-kTwoPi * (rate - h));
  std::vector<cplx> c{0.0};  // zero mean, as the cohomological equation requires
  for (int j = 1;; ++j) {
    c.emplace_back(std::exp(-kTwoPi * j * rate));
    // Weighted tail beyond j, both signs.
    const double tail = 2.0 * std::pow(r, j + 1) / (1.0 - r);
    if (tail < tail_tol) break;
    require(j < 100000, ErrorKind::Size, "geometric fixture needs too many modes");
  }
  return AnalyticObservable(std::move(c), h);
}

cplx AnalyticObservable::coeff(int j) const {
  const int a = std::abs(j);
  if (a > modes()) return 0.0;
  return j >= 0 ? coeffs_[a] : std::conj(coeffs_[a]);
}

double AnalyticObservable::strip_norm(double h_prime) const {
  double s = std::abs(coeffs_[0]);
  for (int j = 1; j <= modes(); ++j) s += 2.0 * std::abs(coeffs_[j]) * std::exp(kTwoPi * j * h_prime);
  return s;
}

cplx AnalyticObservable::operator()(double x, double eps) const {
  cplx s = coeffs_[0];
  for (int j = 1; j <= modes(); ++j) {
    const double ph = kTwoPi * j * x;
    const cplx e(std::cos(ph), std::sin(ph));
    s += coeffs_[j] * e * std::exp(-kTwoPi * j * eps) + std::conj(coeffs_[j]) / e * std::exp(kTwoPi * j * eps);
  }
  return s;
}

double AnalyticObservable::sup_on_strip(double eps, int grid) const {
  require(grid >= 1, ErrorKind::Domain, "grid must be positive");
  double m = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    m = std::max({m, std::abs((*this)(x, eps)), std::abs((*this)(x, -eps))});
  }
  return m;
}

namespace {

long double signed_frac(int j, const Frequency& alpha) {
  const long double t = static_cast<long double>(j) * alpha.value();
  return t - std::nearbyint(t);
}

}  // namespace

cplx small_divisor(int j, const Frequency& alpha) {
  const long double ph = 2.0L * 3.14159265358979323846264338327950288L * signed_frac(j, alpha);
  // e^{i ph} - 1 = 2i sin(ph/2) e^{i ph/2}, free of cancellation for small ph.
  const long double s = std::sin(ph / 2.0L);
  return cplx(static_cast<double>(-2.0L * s * s), static_cast<double>(std::sin(ph)));
}

FullSolution solve_full(const AnalyticObservable& psi, const Frequency& alpha, double h_out,
                        std::size_t cf_terms) {
  require(std::abs(psi.mean()) <= 1e-14, ErrorKind::Domain,
          "psi must have zero mean, got " + std::to_string(psi.mean().real()));
  const auto cf = cf_expand(alpha, cf_terms);
  FullSolution out;
  out.beta = cf.terms() >= 2 ? beta_estimate(cf).value : 0.0;
  if (out.beta >= psi.strip()) {
    fail(ErrorKind::Regime, "beta estimate " + std::to_string(out.beta) +
                                " is not below the strip " + std::to_string(psi.strip()) +
                                "; use solve_truncated");
  }
  std::vector<cplx> c(psi.modes() + 1, 0.0);
  for (int j = 1; j <= psi.modes(); ++j) c[j] = psi.coeff(j) / small_divisor(j, alpha);
  out.phi = AnalyticObservable(std::move(c), h_out);
  out.norm_out = out.phi.strip_norm(h_out);
  return out;
}

TruncatedSolution solve_truncated(const AnalyticObservable& psi, const Frequency& alpha,
                                  const CFExpansion& cf, std::size_t k_index, double h) {
  require(std::abs(psi.mean()) <= 1e-14, ErrorKind::Domain, "psi must have zero mean");
  if (k_index + 1 >= cf.convergents.size()) {
    fail(ErrorKind::Index, "k_index " + std::to_string(k_index) + " beyond the expansion (" +
                               std::to_string(cf.terms()) + " terms)");
  }
  const BigInt qn = cf.q(k_index), qn1 = cf.q(k_index + 1);
  TruncatedSolution out;
  auto& rep = out.report;
  rep.n = k_index;
  rep.q_n = static_cast<double>(to_long_double(qn));
  rep.q_next = static_cast<double>(to_long_double(qn1));
  const BigInt Nbig = qn1 / 6;
  rep.N = Nbig > static_cast<BigInt>(std::numeric_limits<long>::max())
              ? std::numeric_limits<long>::max()
              : static_cast<long>(Nbig);
  rep.regime_applies = qn1 > 100 * qn;

  const int J = psi.modes();
  const int kept = static_cast<int>(std::min<long>(rep.N, J));
  std::vector<cplx> g(kept + 1, 0.0), res(J + 1, 0.0);
  rep.divisor_margin = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= J; ++j) {
    if (j > kept) {
      res[j] = psi.coeff(j);
      continue;
    }
    const cplx div = small_divisor(j, alpha);
    g[j] = psi.coeff(j) / div;
    const cplx back = g[j] * div;
    rep.identity_error = std::max(rep.identity_error, std::abs(back - psi.coeff(j)));
    // Retained modes are solved exactly; their roundoff is identity_error.
    if (static_cast<BigInt>(j) % qn != 0) {
      const double m = 4.0 * rep.q_n * static_cast<double>(dist_to_int(j, alpha.value()));
      rep.divisor_margin = std::min(rep.divisor_margin, m);
      // |e^{2 pi i j alpha} - 1| >= 4 ||j alpha|| >= 1/q_n in the large-quotient regime.
      if (rep.regime_applies && (m < 1.0 || std::abs(div) < 4.0 * dist_to_int(j, alpha.value()) * (1 - 1e-12))) {
        rep.divisor_floor_holds = false;
      }
    }
  }
  out.g = AnalyticObservable(std::move(g), h / 2.0);
  out.residual = AnalyticObservable(std::move(res), h / 2.0);

  rep.psi_norm = psi.strip_norm(h);
  rep.g_norm_l1 = out.g.strip_norm(h / 2.0);
  rep.g_norm_grid = out.g.sup_on_strip(h / 2.0);
  rep.g_bound = 8.0 * (rep.q_n + std::exp(-(h / 2.0) * rep.q_n) * rep.q_next) * rep.psi_norm;
  rep.residual_norm = out.residual.strip_norm(h / 2.0);
  rep.residual_bound = std::exp(-rep.q_next * h / 20.0) * rep.psi_norm;
  rep.g_bound_holds = rep.g_norm_grid <= rep.g_bound || rep.g_norm_l1 <= rep.g_bound;
  rep.residual_bound_holds = rep.residual_norm <= rep.residual_bound;
  return out;
}

ConjugationResult rotations_conjugate(const RotationsCocycle& cocycle, const Frequency& alpha,
                                      const AnalyticObservable& g) {
  const auto& psi = cocycle.defect;
  const int J = std::max(psi.modes(), g.modes());
  std::vector<cplx> c(J + 1, 0.0);
  c[0] = psi.coeff(0);
  for (int j = 1; j <= J; ++j) c[j] = psi.coeff(j) - g.coeff(j) * small_divisor(j, alpha);
  ConjugationResult r;
  r.epsilon = AnalyticObservable(std::move(c), psi.strip() / 2.0);
  r.norm_half = r.epsilon.strip_norm(psi.strip() / 2.0);
  return r;
}

}  // namespace qplab
