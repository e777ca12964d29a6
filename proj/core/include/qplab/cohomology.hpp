#pragma once

#include <cstddef>
#include <vector>

#include "qplab/arithmetic.hpp"
#include "qplab/trig_polynomial.hpp"

namespace qplab {

// Real-valued observable with finitely many Fourier modes, f(x) = sum_j
// fhat(j) e^{2 pi i j x}, |j| <= J, analytic on |Im x| < h.
class AnalyticObservable {
 public:
  AnalyticObservable() = default;
  // coeffs_nonneg[j] = fhat(j), j = 0..J; fhat(-j) = conj(fhat(j)).
  AnalyticObservable(std::vector<cplx> coeffs_nonneg, double h);

  static AnalyticObservable cosine(double amplitude, double h);  // amplitude * 2 cos(2 pi x)
  // fhat(j) = e^{-2 pi |j| rate} for j != 0 and fhat(0) = 0, truncated at the first J whose tail
  // sum_{|j| > J} |fhat(j)| e^{2 pi |j| h} falls below tail_tol. Needs rate > h.
  static AnalyticObservable geometric(double rate, double h, double tail_tol = 1e-12);

  int modes() const { return static_cast<int>(coeffs_.size()) - 1; }
  double strip() const { return h_; }
  cplx coeff(int j) const;
  cplx mean() const { return coeff(0); }
  const std::vector<cplx>& coefficients() const { return coeffs_; }

  // sum_j |fhat(j)| e^{2 pi |j| h'}.
  double strip_norm(double h_prime) const;
  // max |f(x + i eps)| over `grid` points x and both signs of eps.
  double sup_on_strip(double eps, int grid = 512) const;
  cplx operator()(double x, double eps = 0.0) const;

 private:
  std::vector<cplx> coeffs_{cplx(0.0)};
  double h_ = 0.0;
};

// e^{2 pi i j alpha} - 1 with j alpha reduced mod 1 in extended precision.
cplx small_divisor(int j, const Frequency& alpha);

struct FullSolution {
  AnalyticObservable phi;
  double beta = 0.0;
  double norm_out = 0.0;  // |phi|_{h_out}
};

// phi(x + alpha) - phi(x) = psi(x) with every mode inverted. Needs the
// finite-sample beta(alpha) below the strip of psi.
FullSolution solve_full(const AnalyticObservable& psi, const Frequency& alpha, double h_out,
                        std::size_t cf_terms = 64);

struct TruncationBoundReport {
  std::size_t n = 0;
  double q_n = 0.0;
  double q_next = 0.0;
  long N = 0;                      // floor(q_{n+1} / 6)
  double g_norm_l1 = 0.0;          // |g|_{h/2}, l1 surrogate
  double g_norm_grid = 0.0;        // max-grid estimate of the sup norm
  double g_bound = 0.0;            // 8 (q_n + e^{-(h/2) q_n} q_{n+1}) |psi|_h
  double residual_norm = 0.0;      // |psi - (g(. + alpha) - g)|_{h/2}, l1
  double residual_bound = 0.0;     // e^{-q_{n+1} h / 20} |psi|_h
  double psi_norm = 0.0;           // |psi|_h
  bool g_bound_holds = false;      // grid or l1 estimate within the bound
  bool residual_bound_holds = false;
  bool regime_applies = false;     // q_{n+1} > 100 q_n
  double identity_error = 0.0;     // max |ghat(j)(e^{2 pi i j alpha} - 1) - psihat(j)|, retained j
  double divisor_margin = 0.0;     // min 4 q_n ||j alpha|| over retained j not multiple of q_n
  bool divisor_floor_holds = true;
};

struct TruncatedSolution {
  AnalyticObservable g;
  AnalyticObservable residual;
  TruncationBoundReport report;
};

// Modes 0 < |j| <= N inverted, all others dropped; the convergent pair is
// (q_n, q_{n+1}) of cf with n = k_index.
TruncatedSolution solve_truncated(const AnalyticObservable& psi, const Frequency& alpha,
                                  const CFExpansion& cf, std::size_t k_index, double h);

// Cocycle (alpha, R_{psi}) in normal form with the identity frame; R_t is the
// rotation by angle 2 pi t.
struct RotationsCocycle {
  AnalyticObservable defect;
};

struct ConjugationResult {
  AnalyticObservable epsilon;  // psi - (g(. + alpha) - g)
  double norm_half = 0.0;      // |epsilon|_{h/2}
};

// Conjugating by R_g gives R_{g(x+alpha)}^{-1} R_{psi(x)} R_{g(x)} = R_{epsilon(x)}.
ConjugationResult rotations_conjugate(const RotationsCocycle& cocycle, const Frequency& alpha,
                                      const AnalyticObservable& g);

}  // namespace qplab
