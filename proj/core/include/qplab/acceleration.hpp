#pragma once

#include <optional>
#include <vector>

#include "qplab/cocycles.hpp"

namespace qplab {

// 24 points: 0, eight geometric points in [0.005h, 0.05h], fifteen uniform
// points in (0.05h, 0.6h].
std::vector<double> default_eps_grid(double strip_width);

struct EpsilonProfile {
  double E = 0.0;
  std::vector<double> eps_samples;
  std::vector<double> L_samples;
  std::vector<double> stderrs;

  // Filled by fit_profile.
  bool fitted = false;
  std::vector<double> breakpoints;
  std::vector<double> slopes_raw;        // per piece, in units of 2 pi (NaN for 1-sample pieces)
  std::vector<int> slopes_quantized;     // per piece
  std::vector<double> intercepts;        // per piece
  std::vector<std::size_t> piece_start;  // first sample index of each piece
  int omega = 0;
  int omega_bar = 1;
  std::optional<double> eps1;
  bool quantization_failure = false;
  double max_slope_deviation = 0.0;  // max |raw - quantized| over pieces, units of 2 pi
  int max_slope = 1;                 // largest admissible integer slope

  // Value of the fitted convex function at eps (max over pieces).
  double fitted_value(double eps) const;
};

struct ProfileConfig {
  std::vector<double> eps_grid;  // empty: default grid for the potential's strip
  long n = 10000;
  std::size_t phases = 32;
  double x0 = 0.0;
  double slope_tol = 0.1;
  long warmup = -1;
};

EpsilonProfile sample_profile(const TrigPolynomial& v, const Frequency& alpha, double E,
                              const std::vector<double>& eps_grid, long n,
                              const std::vector<double>& phases, long warmup = -1);

// Convex piecewise-affine fit with slopes 2 pi j, 0 <= j <= max_slope, by
// dynamic programming over contiguous sample blocks (accelerations() passes
// max_slope = max(1, deg v)).
EpsilonProfile fit_profile(EpsilonProfile profile, double slope_tol = 0.1, int max_slope = 1);

struct AccelerationResult {
  int omega = 0;
  int omega_bar = 1;
  std::optional<double> eps1;
  bool decided = true;
  EpsilonProfile profile;
};

AccelerationResult accelerations(const TrigPolynomial& v, const Frequency& alpha, double E,
                                 const ProfileConfig& config);

struct Type1Record {
  double E = 0.0;
  int omega = 0;
  int omega_bar = 1;
  bool is_type1 = false;
  bool undecided = false;  // quantization failure or non-convex samples
  bool quantization_flag = false;
};

struct Type1Verdict {
  std::vector<Type1Record> records;
  bool operator_type1 = true;
  bool empty_sample = false;
  std::vector<double> failures;   // decided energies with omega_bar != 1
  std::vector<double> undecided;
};

Type1Verdict classify_type1(const TrigPolynomial& v, const Frequency& alpha,
                            const std::vector<double>& energies, const ProfileConfig& config);

}  // namespace qplab
