#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qplab {

// Convergent numerators/denominators can exceed 64 bits for Liouville-type
// frequencies, so the integer side of the continued-fraction machinery is
// 128-bit.
using BigInt = __int128;

std::string to_string(BigInt value);
long double to_long_double(BigInt value);

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

// A rotation number alpha in (0,1).
//
// Three representations are supported:
//  * a double-precision sample of an irrational number, whose continued
//    fraction can only be trusted for a finite prefix;
//  * an exact rational p/q (lowest terms);
//  * a symbolic quotient stream (golden/silver means, Liouville fixtures),
//    whose expansion is exact to any depth that fits in BigInt.
class Frequency {
 public:
  enum class Kind { IrrationalSample, Rational, Symbolic };

  static Frequency sample(double value);
  static Frequency rational(std::int64_t p, std::int64_t q);
  static Frequency golden();
  static Frequency silver();
  // [0; prefix..., tail, tail, ...]. The periodic tail keeps the number
  // irrational; it defaults to the golden tail.
  static Frequency from_quotients(std::vector<BigInt> prefix, BigInt tail = 1);

  Kind kind() const { return kind_; }
  long double value() const { return value_; }
  double value_d() const { return static_cast<double>(value_); }
  const std::optional<Rational>& as_rational() const { return rational_; }
  bool is_rational() const { return rational_.has_value(); }

  // Quotient a_k (k >= 1) of a symbolic stream.
  BigInt symbolic_quotient(std::size_t k) const;

 private:
  Frequency() = default;

  Kind kind_ = Kind::IrrationalSample;
  long double value_ = 0.0L;
  std::optional<Rational> rational_;
  std::vector<BigInt> prefix_;
  BigInt tail_ = 1;
};

struct Convergent {
  BigInt p = 0;
  BigInt q = 1;
};

struct CFExpansion {
  std::vector<BigInt> quotients;        // a_1..a_K
  std::vector<Convergent> convergents;  // k = 0..K, seed (0,1) at k = 0
  std::size_t trustworthy = 0;          // number of reliable quotients
  bool terminated = false;              // exact finite expansion (rational)
  long double remainder = 0.0L;         // Gauss-map remainder after a_K (sample input)

  std::size_t terms() const { return quotients.size(); }
  BigInt q(std::size_t k) const { return convergents.at(k).q; }
  BigInt p(std::size_t k) const { return convergents.at(k).p; }
};

CFExpansion cf_expand(const Frequency& alpha, std::size_t max_terms);

// Fold [0; a_1, ..., a_K + remainder] back into a real number.
long double cf_fold(const std::vector<BigInt>& quotients, long double remainder = 0.0L);

struct BetaEstimate {
  double value = 0.0;       // max of ln q_{n+1}/q_n over the tail window
  std::size_t index = 0;    // witnessing n
  double global_max = 0.0;  // max over every available n >= 1
  std::vector<double> ratios;  // ratios[n] = ln q_{n+1}/q_n, n = 0..K-1
};

// Finite-sample envelope of beta(alpha) = limsup ln q_{n+1}/q_n. The reported
// value uses the tail window n >= K/2 so that it decays for bounded-type
// frequencies as more terms become available.
BetaEstimate beta_estimate(const CFExpansion& cf);

// ||x||_{R/Z} for x = k * alpha, in extended precision with an error-free
// product.
long double dist_to_int(std::int64_t k, long double alpha);
long double dist_to_int(long double x);

struct QualityReport {
  bool pass = false;
  std::size_t n = 0;
  long double norm_qn_alpha = 0.0L;
  long double lower = 0.0L;  // 1/(2 q_{n+1})
  long double upper = 0.0L;  // 1/q_{n+1}
  bool two_sided_ok = false;
  bool small_divisor_applicable = false;  // q_{n+1} > 100 q_n
  bool small_divisor_ok = true;
  long double small_divisor_margin = 0.0L;  // min ||k alpha|| - 1/(4 q_n) over scanned k
  long double worst_margin = 0.0L;
  std::size_t scanned = 0;
};

// Checks 1/(2q_{n+1}) <= ||q_n alpha|| <= 1/q_{n+1} and, when q_{n+1} > 100 q_n,
// the lower bound ||k alpha|| >= 1/(4 q_n) for 0 < |k| < q_{n+1}/6, k not a
// multiple of q_n. The scan is capped at 10^8 values of k.
QualityReport qn_quality_check(const Frequency& alpha, const CFExpansion& cf, std::size_t n);

struct LiouvilleFrequency {
  Frequency alpha;
  CFExpansion cf;
  std::vector<double> ratios;  // ln q_{n+1}/q_n for n = 1..terms-1
};

// Frequency whose quotients follow a_{n+1} = ceil(e^{beta q_n}/q_n) after a
// warm-up quotient a_1 = max(1, floor(1.2/beta)).
LiouvilleFrequency make_liouville(double beta_target, std::size_t terms);

}  // namespace qplab
