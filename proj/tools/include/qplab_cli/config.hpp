#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qplab/arithmetic.hpp"
#include "qplab/trig_polynomial.hpp"

namespace qplab::cli {

// Schema violation; `path` is a JSON-pointer-like location such as
// "$.potential.lamda".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct PotentialSpec {
  std::string family = "amo";  // amo | extended_harper | free | fourier
  double lambda = 1.0;
  double a = 3.0;
  double b = 0.3;
  std::vector<cplx> coefficients;  // fourier: c_0..c_d
  double strip_width = 1.0;

  TrigPolynomial build() const;
  nlohmann::json to_json() const;
};

struct FrequencySpec {
  std::string kind = "golden";  // golden | silver | value | rational | liouville
  double value = 0.0;
  std::int64_t p = 0, q = 1;
  double beta = 1.0;
  std::size_t terms = 4;

  Frequency build() const;
  nlohmann::json to_json() const;
};

struct ObservableSpec {
  std::string kind = "geometric";  // geometric | cosine
  double rate = 0.6;
  double amplitude = 1.0;
  nlohmann::json to_json() const;
};

struct RunConfig {
  std::string command;
  PotentialSpec potential;
  PotentialSpec dual_potential;  // 2 cos(2 pi x)
  FrequencySpec frequency;

  long n = 10000;
  std::size_t phases = 32;
  int N = 400;
  std::vector<double> eps_grid;  // empty: default grid for the strip
  std::vector<double> energies;  // empty: sampled from the truncated spectrum
  std::vector<double> energy_range;  // [lo, hi] with energy_count points
  std::size_t energy_count = 20;
  double slope_tol = 0.1;
  double simplicity_floor = 0.01;
  int q_max = 50;
  int bloch_phases = 1;
  std::vector<double> deltas{1e-2, 1e-3};
  int k_max = 30;
  double min_gap = 1e-3;
  double label_tol = 5e-3;
  ObservableSpec psi;
  double h = 0.5;
  std::vector<std::size_t> k_indices;  // empty: every available convergent pair
  std::uint64_t seed = 0;

  // First phase of every lattice; derived from the seed only.
  double phase_offset() const;
  nlohmann::json resolved() const;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"butterfly", "profile",  "classify", "dual",
                                          "spectrum",  "kotani",   "cohomology"};
  return c;
}

RunConfig parse_config(const nlohmann::json& doc, const std::string& command);
RunConfig parse_config_text(const std::string& text, const std::string& command);

}  // namespace qplab::cli
