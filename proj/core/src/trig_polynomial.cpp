#include "qplab/trig_polynomial.hpp"

#include <cmath>

#include "qplab/error.hpp"

namespace qplab {

TrigPolynomial::TrigPolynomial(std::vector<cplx> coeffs_nonneg, double strip_width)
    : coeffs_(std::move(coeffs_nonneg)), strip_width_(strip_width) {
  require(!coeffs_.empty(), ErrorKind::Domain, "trig polynomial needs at least c_0");
  require(std::isfinite(strip_width) && strip_width > 0.0, ErrorKind::Domain,
          "strip width must be positive");
  coeffs_[0] = cplx(coeffs_[0].real(), 0.0);
  while (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
}

TrigPolynomial TrigPolynomial::constant(double value, double strip_width) {
  return TrigPolynomial({cplx(value)}, strip_width);
}

TrigPolynomial TrigPolynomial::cosine(double lambda, double strip_width) {
  return TrigPolynomial({0.0, lambda}, strip_width);
}

TrigPolynomial TrigPolynomial::two_cosine(double a, double b, double strip_width) {
  return TrigPolynomial({0.0, a, b}, strip_width);
}

cplx TrigPolynomial::coeff(int k) const {
  const int d = degree();
  if (k > d || k < -d) return 0.0;
  return k >= 0 ? coeffs_[k] : std::conj(coeffs_[-k]);
}

bool TrigPolynomial::is_constant() const { return degree() == 0; }

bool TrigPolynomial::has_real_coefficients() const {
  for (const auto& c : coeffs_) {
    if (c.imag() != 0.0) return false;
  }
  return true;
}

cplx TrigPolynomial::at(cplx z) const {
  cplx sum = coeffs_[0];
  const cplx unit = std::exp(cplx(0.0, kTwoPi) * z);
  const cplx unit_inv = 1.0 / unit;
  cplx up = 1.0, down = 1.0;
  for (int k = 1; k <= degree(); ++k) {
    up *= unit;
    down *= unit_inv;
    sum += coeffs_[k] * up + std::conj(coeffs_[k]) * down;
  }
  return sum;
}

cplx TrigPolynomial::operator()(double x, double eps) const { return at(cplx(x, eps)); }

TrigPolynomial TrigPolynomial::scaled(double factor) const {
  std::vector<cplx> c = coeffs_;
  for (auto& ck : c) ck *= factor;
  if (factor == 0.0) c.assign(1, 0.0);
  return TrigPolynomial(std::move(c), strip_width_);
}

TrigPolynomial TrigPolynomial::plus(const TrigPolynomial& other) const {
  std::vector<cplx> c(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) c[k] += other.coeffs_[k];
  return TrigPolynomial(std::move(c), std::min(strip_width_, other.strip_width_));
}

OrbitEvaluator::OrbitEvaluator(const TrigPolynomial& v, double x0, double step, double eps)
    : v_(&v), x0_(x0), step_(step), eps_(eps) {
  const int d = v.degree();
  weights_plus_.resize(d + 1);
  weights_minus_.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    weights_plus_[k] = v.coeff(k) * std::exp(-kTwoPi * k * eps);
    weights_minus_[k] = v.coeff(-k) * std::exp(kTwoPi * k * eps);
  }
  rotation_ = std::polar(1.0, kTwoPi * step);
  resync();
}

void OrbitEvaluator::resync() {
  const double x = x0_ + static_cast<double>(index_) * step_;
  phasor_ = std::polar(1.0, kTwoPi * (x - std::floor(x)));
  cplx sum = weights_plus_[0];
  cplx up = 1.0;
  for (std::size_t k = 1; k < weights_plus_.size(); ++k) {
    up *= phasor_;
    sum += weights_plus_[k] * up + weights_minus_[k] * std::conj(up);
  }
  current_ = sum;
}

void OrbitEvaluator::advance() {
  ++index_;
  if ((index_ & 255) == 0) {
    resync();
    return;
  }
  phasor_ *= rotation_;
  cplx sum = weights_plus_[0];
  cplx up = 1.0;
  for (std::size_t k = 1; k < weights_plus_.size(); ++k) {
    up *= phasor_;
    sum += weights_plus_[k] * up + weights_minus_[k] * std::conj(up);
  }
  current_ = sum;
}

}  // namespace qplab
