#pragma once

#include <complex>
#include <vector>

namespace qplab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Real trigonometric polynomial v(x) = sum_{|k|<=d} c_k e^{2 pi i k x}, with
// c_{-k} = conj(c_k), analytic in the strip |Im x| < strip_width.
//
// Degree zero (a constant) is allowed so that the free Laplacian can be
// expressed; the dual constructions require degree >= 1 with c_d != 0.
class TrigPolynomial {
 public:
  // coeffs_nonneg[k] = c_k for k = 0..d; negative modes follow by reality.
  // The imaginary part of c_0 is discarded.
  explicit TrigPolynomial(std::vector<cplx> coeffs_nonneg, double strip_width = 1.0);

  static TrigPolynomial constant(double value, double strip_width = 1.0);
  // 2 lambda cos(2 pi x): c_{+-1} = lambda.
  static TrigPolynomial cosine(double lambda, double strip_width = 1.0);
  // 2a cos(2 pi x) + 2b cos(4 pi x).
  static TrigPolynomial two_cosine(double a, double b, double strip_width = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double strip_width() const { return strip_width_; }
  // c_k for any k (zero outside [-d, d]).
  cplx coeff(int k) const;
  bool is_constant() const;
  // True when all c_k are real (even potential).
  bool has_real_coefficients() const;

  // v(x + i eps).
  cplx operator()(double x, double eps = 0.0) const;
  cplx at(cplx z) const;

  TrigPolynomial scaled(double factor) const;
  TrigPolynomial plus(const TrigPolynomial& other) const;

 private:
  std::vector<cplx> coeffs_;
  double strip_width_;
};

// Evaluates v(x0 + j*step + i*eps) along an arithmetic progression using a
// multiplicative phasor recurrence, resynchronised periodically.
class OrbitEvaluator {
 public:
  OrbitEvaluator(const TrigPolynomial& v, double x0, double step, double eps);

  cplx value() const { return current_; }
  void advance();

 private:
  void resync();

  const TrigPolynomial* v_;
  double x0_;
  double step_;
  double eps_;
  long index_ = 0;
  cplx phasor_;
  cplx rotation_;
  std::vector<cplx> weights_plus_;   // c_k e^{-2 pi k eps}
  std::vector<cplx> weights_minus_;  // c_{-k} e^{+2 pi k eps}
  cplx current_;
};

}  // namespace qplab
