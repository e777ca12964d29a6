#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "qplab/arithmetic.hpp"
#include "qplab/linalg.hpp"
#include "qplab/trig_polynomial.hpp"

namespace qplab {

struct SchrodingerFamily {
  TrigPolynomial v;
  cplx E;
};

struct ConstantFamily {
  MatC M;
};

// Transfer matrix of the finite-range operator
//   (L u)_n = sum_k vhat_k u_{n+k} + w(x + n alpha) u_n.
struct DualFiniteRangeFamily {
  TrigPolynomial v;
  TrigPolynomial w;
  cplx E;
};

// d consecutive DualFiniteRange steps fused into one block step over d*alpha.
struct DualBlockFamily {
  TrigPolynomial v;
  TrigPolynomial w;
  cplx E;
};

using CocycleFamily =
    std::variant<SchrodingerFamily, ConstantFamily, DualFiniteRangeFamily, DualBlockFamily>;

// A matrix cocycle over x -> x + shift on the circle, evaluated at the
// complexified phase x + i eps.
class CocycleSpec {
 public:
  CocycleSpec(Frequency alpha, CocycleFamily family, double eps = 0.0);

  static CocycleSpec schrodinger(const Frequency& alpha, const TrigPolynomial& v, cplx E,
                                 double eps = 0.0);
  static CocycleSpec constant(const Frequency& alpha, const MatC& M);
  static CocycleSpec dual(const Frequency& alpha, const TrigPolynomial& v,
                          const TrigPolynomial& w, cplx E, double eps = 0.0);
  static CocycleSpec dual_block(const Frequency& alpha, const TrigPolynomial& v,
                                const TrigPolynomial& w, cplx E, double eps = 0.0);

  const Frequency& frequency() const { return alpha_; }
  double alpha() const { return alpha_value_; }
  // Phase increment per step: alpha, or d*alpha for block cocycles.
  double shift() const;
  double eps() const { return eps_; }
  int dim() const { return dim_; }
  const CocycleFamily& family() const { return family_; }
  bool is_schrodinger() const { return std::holds_alternative<SchrodingerFamily>(family_); }

  CocycleSpec with_eps(double eps) const;
  CocycleSpec with_energy(cplx E) const;

  // A(x + i eps) written into out (resized if necessary).
  void step(double x, MatC& out) const;
  MatC step(double x) const;
  // A(x + i eps)^{-1}; closed form for the Schrodinger family.
  void step_inverse(double x, MatC& out) const;

 private:
  Frequency alpha_;
  double alpha_value_;
  CocycleFamily family_;
  double eps_;
  int dim_;
};

// [[E - v(x + i eps), -1], [1, 0]].
Eigen::Matrix2cd schrodinger_step(const TrigPolynomial& v, cplx E, double x, double eps);

// A_n(x): A(x+(n-1)s) ... A(x) for n >= 0, inverse iterates for n < 0.
MatC iterate(const CocycleSpec& spec, double x0, long n);

// ||M^* S M - S|| in operator norm.
double symplectic_defect(const MatC& M, const MatC& S);

struct LyapunovEstimate {
  std::vector<double> exponents;  // descending, nats per step
  std::vector<double> stderr_;    // across-phase standard error
  long n_steps = 0;
  std::size_t phase_samples = 0;
  bool short_run = false;         // n below the recommended 100
  std::vector<std::vector<double>> per_phase;  // [phase][j]
};

// x_j = x0 + j / count.
std::vector<double> phase_lattice(double x0, std::size_t count);

// Sum_j ln R_jj over n steps of the QR-reorthonormalised product started at
// x (after `warmup` discarded steps), for the top k directions.
std::vector<double> log_growth(const CocycleSpec& spec, double x, long n, int k, long warmup);

// Accumulated ln R_jj at each checkpoint (increasing step counts), with no
// warm-up: the initial frame is the identity's first k columns.
std::vector<std::vector<double>> log_growth_checkpoints(const CocycleSpec& spec, double x,
                                                        const std::vector<long>& checkpoints,
                                                        int k);

// Top-k finite-volume Lyapunov exponents averaged over the given phases.
LyapunovEstimate lyapunov_spectrum(const CocycleSpec& spec, long n,
                                   const std::vector<double>& phases, int k, long warmup = -1);

}  // namespace qplab
