#include "qplab/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qplab/error.hpp"

namespace qplab {
namespace {

constexpr long double kTrustFloor = 0x1p-13L;  // 53 - 40 bits of the sample survive
constexpr std::size_t kMaxScan = 100'000'000;

bool mul_add(BigInt a, BigInt b, BigInt c, BigInt& out) {
  BigInt prod;
  if (__builtin_mul_overflow(a, b, &prod)) return false;
  return !__builtin_add_overflow(prod, c, &out);
}

// Appends a_k to the expansion; false when the convergent overflows.
bool push_quotient(CFExpansion& cf, BigInt a) {
  const std::size_t k = cf.convergents.size();  // index of the new convergent
  const Convergent prev = cf.convergents[k - 1];
  const Convergent prev2 = k >= 2 ? cf.convergents[k - 2] : Convergent{1, 0};
  Convergent next;
  if (!mul_add(a, prev.p, prev2.p, next.p) || !mul_add(a, prev.q, prev2.q, next.q)) {
    return false;
  }
  cf.quotients.push_back(a);
  cf.convergents.push_back(next);
  return true;
}

long double periodic_tail_value(BigInt tail) {
  const long double t = to_long_double(tail);
  return (std::sqrt(t * t + 4.0L) - t) / 2.0L;
}

}  // namespace

std::string to_string(BigInt value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(value)
                                   : static_cast<unsigned __int128>(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

long double to_long_double(BigInt value) { return static_cast<long double>(value); }

Frequency Frequency::sample(double value) {
  require(std::isfinite(value) && value > 0.0 && value < 1.0, ErrorKind::Domain,
          "frequency must lie in (0,1), got " + std::to_string(value));
  Frequency f;
  f.kind_ = Kind::IrrationalSample;
  f.value_ = value;
  return f;
}

Frequency Frequency::rational(std::int64_t p, std::int64_t q) {
  require(q > 0 && p > 0 && p < q, ErrorKind::Domain,
          "rational frequency must satisfy 0 < p < q, got " + std::to_string(p) + "/" +
              std::to_string(q));
  const std::int64_t g = std::gcd(p, q);
  Frequency f;
  f.kind_ = Kind::Rational;
  f.rational_ = Rational{p / g, q / g};
  f.value_ = static_cast<long double>(p / g) / static_cast<long double>(q / g);
  return f;
}

Frequency Frequency::golden() { return from_quotients({}, 1); }

Frequency Frequency::silver() { return from_quotients({}, 2); }

Frequency Frequency::from_quotients(std::vector<BigInt> prefix, BigInt tail) {
  require(tail >= 1, ErrorKind::Domain, "tail quotient must be positive");
  for (BigInt a : prefix) require(a >= 1, ErrorKind::Domain, "quotients must be positive");
  Frequency f;
  f.kind_ = Kind::Symbolic;
  f.value_ = cf_fold(prefix, periodic_tail_value(tail));
  f.prefix_ = std::move(prefix);
  f.tail_ = tail;
  return f;
}

BigInt Frequency::symbolic_quotient(std::size_t k) const {
  require(kind_ == Kind::Symbolic && k >= 1, ErrorKind::Domain, "not a symbolic stream");
  return k <= prefix_.size() ? prefix_[k - 1] : tail_;
}

long double cf_fold(const std::vector<BigInt>& quotients, long double remainder) {
  long double x = remainder;
  for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) {
    x = 1.0L / (to_long_double(*it) + x);
  }
  return x;
}

CFExpansion cf_expand(const Frequency& alpha, std::size_t max_terms) {
  require(max_terms >= 1, ErrorKind::Domain, "max_terms must be positive");
  const long double value = alpha.value();
  require(value > 0.0L && value < 1.0L, ErrorKind::Domain, "frequency outside (0,1)");

  CFExpansion cf;
  cf.convergents.push_back(Convergent{0, 1});

  switch (alpha.kind()) {
    case Frequency::Kind::Rational: {
      std::int64_t num = alpha.as_rational()->p;
      std::int64_t den = alpha.as_rational()->q;
      while (num != 0 && cf.terms() < max_terms) {
        const std::int64_t a = den / num;
        const std::int64_t r = den % num;
        push_quotient(cf, a);
        den = num;
        num = r;
      }
      cf.terminated = (num == 0);
      cf.trustworthy = cf.terms();
      break;
    }
    case Frequency::Kind::Symbolic: {
      for (std::size_t k = 1; k <= max_terms; ++k) {
        if (!push_quotient(cf, alpha.symbolic_quotient(k))) break;
      }
      cf.trustworthy = cf.terms();
      break;
    }
    case Frequency::Kind::IrrationalSample: {
      long double x = value;
      // Absolute uncertainty of the running remainder: half an ulp of the
      // double sample, amplified by 1/x^2 under each Gauss-map step.
      long double err = std::ldexp(value, -53);
      while (cf.terms() < max_terms) {
        if (x == 0.0L) {
          cf.terminated = true;
          break;
        }
        const long double inv = 1.0L / x;
        const long double a = std::floor(inv);
        const long double next = inv - a;
        const long double next_err = err / (x * x) + std::ldexp(inv, -63);
        if (next_err > kTrustFloor || a > 1e30L) break;
        if (!push_quotient(cf, static_cast<BigInt>(a))) break;
        x = next;
        err = next_err;
      }
      cf.remainder = x;
      cf.trustworthy = cf.terms();
      break;
    }
  }
  return cf;
}

BetaEstimate beta_estimate(const CFExpansion& cf) {
  const std::size_t K = std::min(cf.trustworthy, cf.terms());
  if (K < 3) {
    fail(ErrorKind::InsufficientData,
         "beta estimate needs at least 3 trustworthy terms, have " + std::to_string(K));
  }
  BetaEstimate out;
  out.ratios.resize(K);
  for (std::size_t n = 0; n < K; ++n) {
    out.ratios[n] = static_cast<double>(std::log(to_long_double(cf.q(n + 1))) /
                                        to_long_double(cf.q(n)));
  }
  for (std::size_t n = 1; n < K; ++n) out.global_max = std::max(out.global_max, out.ratios[n]);
  const std::size_t start = std::max<std::size_t>(1, K / 2);
  out.index = start;
  out.value = out.ratios[start];
  for (std::size_t n = start; n < K; ++n) {
    if (out.ratios[n] > out.value) {
      out.value = out.ratios[n];
      out.index = n;
    }
  }
  return out;
}

long double dist_to_int(long double x) {
  long double frac = x - std::floor(x);
  return std::min(frac, 1.0L - frac);
}

long double dist_to_int(std::int64_t k, long double alpha) {
  const long double kk = static_cast<long double>(k);
  const long double hi = kk * alpha;
  const long double lo = std::fma(kk, alpha, -hi);  // exact product residual
  long double frac = (hi - std::floor(hi)) + lo;
  frac -= std::floor(frac);
  return std::min(frac, 1.0L - frac);
}

QualityReport qn_quality_check(const Frequency& alpha, const CFExpansion& cf, std::size_t n) {
  const std::size_t K = std::min(cf.trustworthy, cf.terms());
  if (n < 1 || n + 1 > K) {
    fail(ErrorKind::Index, "convergent index " + std::to_string(n) +
                               " outside trustworthy prefix [1, " + std::to_string(K) + ")");
  }
  const BigInt qn = cf.q(n);
  const BigInt qn1 = cf.q(n + 1);
  const BigInt scan_bound = (qn1 + 5) / 6;  // k < q_{n+1}/6
  require(scan_bound <= static_cast<BigInt>(kMaxScan), ErrorKind::Size,
          "q_{n+1} = " + to_string(qn1) + " too large for a direct scan");
  require(qn <= static_cast<BigInt>(INT64_MAX), ErrorKind::Size, "q_n exceeds 64 bits");

  const long double a = alpha.value();
  QualityReport r;
  r.n = n;
  r.norm_qn_alpha = dist_to_int(static_cast<std::int64_t>(qn), a);
  r.lower = 1.0L / (2.0L * to_long_double(qn1));
  r.upper = 1.0L / to_long_double(qn1);
  r.two_sided_ok = r.norm_qn_alpha >= r.lower && r.norm_qn_alpha <= r.upper;
  r.worst_margin = std::min(r.norm_qn_alpha - r.lower, r.upper - r.norm_qn_alpha);

  r.small_divisor_applicable = qn1 > 100 * qn;
  if (r.small_divisor_applicable) {
    const long double floor_value = 1.0L / (4.0L * to_long_double(qn));
    const std::int64_t q64 = static_cast<std::int64_t>(qn);
    long double worst = INFINITY;
    for (std::int64_t k = 1; 6 * static_cast<BigInt>(k) < qn1; ++k) {
      ++r.scanned;
      if (k % q64 == 0) continue;
      worst = std::min(worst, dist_to_int(k, a) - floor_value);
    }
    r.small_divisor_margin = worst;
    r.small_divisor_ok = worst >= 0.0L;
    r.worst_margin = std::min(r.worst_margin, worst);
  }
  r.pass = r.two_sided_ok && r.small_divisor_ok;
  return r;
}

LiouvilleFrequency make_liouville(double beta_target, std::size_t terms) {
  require(std::isfinite(beta_target) && beta_target > 0.0, ErrorKind::Domain,
          "beta_target must be positive");
  require(terms >= 1 && terms <= 12, ErrorKind::Domain, "terms must lie in [1, 12]");

  const long double beta = beta_target;
  std::vector<BigInt> quotients;
  quotients.push_back(std::max<BigInt>(1, static_cast<BigInt>(std::floor(1.2L / beta + 1e-9L))));

  CFExpansion scratch;
  scratch.convergents.push_back(Convergent{0, 1});
  push_quotient(scratch, quotients[0]);
  // ln of the largest quotient we allow; leaves headroom below 2^127.
  constexpr long double kLogLimit = 86.0L;
  while (quotients.size() < terms) {
    const long double qn = to_long_double(scratch.convergents.back().q);
    const long double exponent = beta * qn;
    if (exponent > kLogLimit) {
      fail(ErrorKind::Size, "q_n overflows 128-bit range; largest safe terms = " +
                                std::to_string(quotients.size()));
    }
    const BigInt a = static_cast<BigInt>(std::ceil(std::exp(exponent) / qn));
    if (!push_quotient(scratch, a)) {
      fail(ErrorKind::Size, "q_n overflows 128-bit range; largest safe terms = " +
                                std::to_string(quotients.size()));
    }
    quotients.push_back(a);
  }

  LiouvilleFrequency out{Frequency::from_quotients(quotients), {}, {}};
  out.cf = cf_expand(out.alpha, terms);
  for (std::size_t n = 1; n < terms; ++n) {
    out.ratios.push_back(static_cast<double>(std::log(to_long_double(out.cf.q(n + 1))) /
                                             to_long_double(out.cf.q(n))));
  }
  return out;
}

}  // namespace qplab
