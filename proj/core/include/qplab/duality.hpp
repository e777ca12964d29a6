#pragma once

#include <vector>

#include "qplab/cocycles.hpp"

namespace qplab {

// S = [[0, -C^*], [C, 0]] with C the upper triangular Toeplitz matrix whose
// first row is (vhat_d, vhat_{d-1}, ..., vhat_1).
struct SymplecticForm {
  int d = 0;
  MatC C;
  MatC S;
};

SymplecticForm symplectic_form(const TrigPolynomial& v);

double symplectic_defect(const MatC& M, const SymplecticForm& form);

// One-site transfer matrix acting on (u_{n+d-1}, ..., u_{n-d}) for the
// finite-range equation sum_k vhat_k u_{n+k} + w(theta) u_n = E u_n.
MatC dual_step(const TrigPolynomial& v, const TrigPolynomial& w, cplx E, double theta,
               double eps = 0.0);

// [[C^{-1}(E - B(theta)), -C^{-1} C^*], [I, 0]], equal to the product of d
// consecutive dual steps from theta + (d-1) alpha down to theta.
MatC dual_block_step(const TrigPolynomial& v, const TrigPolynomial& w, cplx E, double theta,
                     double alpha, double eps = 0.0);

// d x d band matrix B(theta): B(r, c) = vhat_{r-c}, plus w(theta + (d-1-r) alpha)
// on the diagonal.
MatC dual_block_B(const TrigPolynomial& v, const TrigPolynomial& w, double theta, double alpha,
                  double eps = 0.0);

struct DualOptions {
  double simplicity_floor = 0.01;
  long warmup = -1;
};

struct DualSpectrumRecord {
  double E = 0.0;
  std::vector<double> gammas;      // ascending, nonnegative half
  std::vector<double> stderr_;     // matching gammas
  std::vector<double> exponents;   // raw 2d spectrum, descending
  double gap12 = 0.0;
  double gap12_stderr = 0.0;
  bool simple = false;
  bool decided = false;  // false when the gap sits inside the noise floor
  bool short_run = false;
  double pairing_violation = 0.0;  // max |e_j + e_{2d-1-j}|
};

// Lyapunov spectrum of the dual cocycle of (v, w) at real energy E.
DualSpectrumRecord dual_lyapunov(const TrigPolynomial& v, const TrigPolynomial& w,
                                 const Frequency& alpha, double E, long n,
                                 const std::vector<double>& phases, const DualOptions& opts = {});

struct DominationVerdict {
  enum class State { Dominated, NotDominated, Undecided };
  State state = State::Undecided;
  bool dominated = false;
  double growth_rate = 0.0;          // c at the largest n
  std::vector<double> rates;         // c(n) for each n in n_list
};

// Rate min_x ln(sigma_k / sigma_{k+1})(A_n(x)) / n over the phases, tracked
// through the R factors of the re-orthonormalised chain.
DominationVerdict domination_check(const CocycleSpec& spec, int k, const std::vector<long>& n_list,
                                   const std::vector<double>& phases, double rate_floor = 0.005);

struct CrosscheckResult {
  double distance = 0.0;
  bool reliable = false;
  std::vector<double> h_points;
  std::vector<double> l_points;
};

// Eigenvalues of the N x N Dirichlet truncation of H_{v,alpha,x} with
// boundary-localised states removed.
std::vector<double> schrodinger_truncation_points(const TrigPolynomial& v, double alpha, int N,
                                                  const std::vector<double>& phases, bool trim);

// Same for the finite-range operator with hopping vhat and diagonal w.
std::vector<double> dual_truncation_points(const TrigPolynomial& v, const TrigPolynomial& w,
                                           double alpha, int N, const std::vector<double>& phases,
                                           bool trim);

CrosscheckResult duality_spectrum_crosscheck(const TrigPolynomial& v, double alpha, int N,
                                             const std::vector<double>& phases);

struct PairingTrace {
  // True pairing <u_j, S v_j> = scaled[j] * exp(log_scale[j]).
  std::vector<cplx> scaled;
  std::vector<double> log_scale;
  // max_j |scaled[j] - P_0 exp(-log_scale[j])| / ||S||: drift measured at the
  // scale of the unit iterates, which stays well conditioned as they align.
  double max_scaled_drift = 0.0;
  // max_j |P_j / P_0 - 1|; meaningful only while growth stays moderate.
  double max_relative_drift = 0.0;
};

PairingTrace symplectic_pairing(const CocycleSpec& spec, const VecC& u0, const VecC& v0, double x0,
                                long n);

}  // namespace qplab
