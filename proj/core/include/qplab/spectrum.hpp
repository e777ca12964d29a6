#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qplab/trig_polynomial.hpp"

namespace qplab {

struct SchrodingerOperator {
  TrigPolynomial v;
};

// (L u)_n = sum_k vhat_k u_{n+k} + w(theta + n alpha) u_n.
struct DualOperator {
  TrigPolynomial v;
  TrigPolynomial w;
};

using OperatorSpec = std::variant<SchrodingerOperator, DualOperator>;

struct Gap {
  double left = 0.0;
  double right = 0.0;
  double ids = 0.0;
  std::optional<int> label;
  double residual = 0.0;  // ||ids - label * alpha||_{R/Z} for the best candidate
};

struct SpectrumApprox {
  std::vector<double> points;      // interior eigenvalues, sorted, multiplicity kept
  std::vector<double> all_points;  // every eigenvalue, for counting
  std::size_t truncation = 0;      // N
  std::size_t phase_count = 0;
  bool reliable = false;           // N >= 50
  std::vector<std::pair<double, double>> bands;
  std::vector<Gap> gaps;
};

// Dirichlet truncations over the given phases. Interior points exclude
// eigenvectors carrying more than half their weight in the edge windows.
SpectrumApprox truncated_spectrum(const OperatorSpec& op, double alpha, int N,
                                  const std::vector<double>& phases);

// Bands of the p/q-periodic Schrodinger operator from the periodic and
// antiperiodic Bloch eigenvalues, united over phases x0 + j/(bloch_phases q).
// With one phase there are exactly q bands.
SpectrumApprox schrodinger_bands(const TrigPolynomial& v, std::int64_t p, std::int64_t q,
                                 int bloch_phases = 1, double x0 = 0.0);

// Fraction of all_points <= E.
double ids_from_points(const SpectrumApprox& s, double E);

double ids(const OperatorSpec& op, double alpha, double E, int N,
           const std::vector<double>& phases);

struct RotationData {
  double E = 0.0;
  double rho = 0.0;           // from the projective dynamics, in [0, 1/2]
  double N = 0.0;             // 1 - 2 rho
  double rho_from_ids = 0.0;  // (1 - ids) / 2
  double N_from_ids = 0.0;
  double discrepancy = 0.0;   // |N - N_from_ids|
};

// Fibered rotation number of the Schrodinger cocycle at real E by Birkhoff
// averaging of the lifted projective increment. ids_N = 0 skips the IDS
// cross-fill.
RotationData rotation_number(const TrigPolynomial& v, double alpha, double E, long n,
                             const std::vector<double>& phases, int ids_N = 400);

struct GapOptions {
  int k_max = 30;
  double min_gap = 1e-3;
  double label_tol = 5e-3;
  int spacing_window = 20;
};

SpectrumApprox detect_and_label_gaps(SpectrumApprox s, double alpha, const GapOptions& opts = {});

// Hausdorff distance between a point cloud and a union of closed intervals.
double hausdorff_to_bands(const std::vector<double>& sorted_points,
                          const std::vector<std::pair<double, double>>& bands);

// `count` interior points evenly spaced by index, as energy samples of the
// spectrum.
std::vector<double> spectral_samples(const SpectrumApprox& s, std::size_t count);

}  // namespace qplab
