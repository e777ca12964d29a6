#pragma once

#include <vector>

#include "qplab/duality.hpp"

namespace qplab {

// Scalar Weyl-Titchmarsh data of the Schrodinger cocycle at the state
// (u_0, u_{-1}) attached to phase x:
//   m_plus  = u_0 / u_{-1} for the solution decaying at +infinity,
//   m_minus = u_{-1} / u_0 for the solution decaying at -infinity.
// With this convention S_z(x) . m_plus(x) = m_plus(x + alpha) as a Mobius map.
struct ScalarM {
  cplx m_plus;
  cplx m_minus;
  double delta_plus = 0.0;   // distance between runs from two seeds
  double delta_minus = 0.0;
  long n_tail = 0;
};

ScalarM m_schrodinger(const TrigPolynomial& v, double alpha, cplx z, double x, long n_tail,
                      double tol = 1e-10);

// Diagonal Green's function (m_+(x + alpha) + m_-(x) + v(x) - z)^{-1} at site 0.
cplx green_schrodinger(const TrigPolynomial& v, double alpha, cplx z, double x, long n_tail);

// Matrix data for the finite-range operator with hopping vhat (from v) and
// potential w, written in blocks of d sites:
//   C U_{j+1} + (B(theta + j d alpha) - z) U_j + C^* U_{j-1} = 0.
struct MState {
  cplx z;
  double theta = 0.0;
  int d = 0;
  MatC C;
  MatC B;
  MatC M_plus;
  MatC M_minus;
  MatC green;
  cplx m_scalar_plus;   // d = 1 only
  cplx m_scalar_minus;
  double riccati_residual_plus = 0.0;
  double riccati_residual_minus = 0.0;
  double frame_condition = 0.0;  // cond(F^+(0))
  double frame_delta = 0.0;      // two-seed subspace discrepancy
  // 2d x d stable frame (U_0; U_{-1}) with the d-1 fastest decaying
  // directions first and the slowest decaying solution u^+ last.
  MatC stable_frame;
};

struct RiccatiOptions {
  long n_tail = 200;          // block steps
  double frame_tol = 1e-9;    // two-seed agreement required
  double max_condition = 1e8;
  bool with_residuals = true;
};

MState riccati_M(const TrigPolynomial& v, const TrigPolynomial& w, double alpha, cplx z,
                 double theta, const RiccatiOptions& opts = {});

struct GreenIdentityReport {
  double first = 0.0;   // G(w) vs (-C^* M_+^{-1}(T^{-d}w) + C^* M_-(w))^{-1}
  double second = 0.0;  // G(T^{-d}w) vs (C M_+(T^{-d}w) - C M_-^{-1}(w))^{-1}
  double third = 0.0;   // G(w) C^* M_+^{-1}(T^{-d}w) vs M_+(T^{-d}w) G(T^{-d}w) C - I
  double max_deviation = 0.0;
  bool chain_consistent = false;  // shifted.theta == theta - d alpha (mod 1)
};

GreenIdentityReport green_identities_check(const MState& state, const MState& shifted,
                                           double alpha);

// g(z, theta) = (F^{-1} G F)_{dd} with F the top block of the stable frame.
cplx kotani_g(const MState& state);

struct JohnsonMoserReport {
  double lhs = 0.0;  // d L^d / d Im z by centred differences
  double rhs = 0.0;  // (1/d) Im of the phase average of g
  double residual = 0.0;  // ||lhs| - |rhs||
  double L_at_z = 0.0;
};

// L^d is the d-th largest exponent of the one-step dual cocycle at complex z.
JohnsonMoserReport johnson_moser_residual(const TrigPolynomial& v, const TrigPolynomial& w,
                                          const Frequency& alpha, cplx z, double d_eps, long n,
                                          std::size_t phases, const RiccatiOptions& opts = {});

struct ReflectionlessPoint {
  double E = 0.0;
  double delta = 0.0;
  double median = 0.0;  // over phases
  double mean = 0.0;
  double max = 0.0;
};

// |m_+(E + i delta) - 1/conj(m_-(E + i delta))| for the Schrodinger operator,
// per energy and delta, summarised over phases.
std::vector<ReflectionlessPoint> reflectionless_residual(const TrigPolynomial& v, double alpha,
                                                         const std::vector<double>& energies,
                                                         const std::vector<double>& deltas,
                                                         const std::vector<double>& phases);

// Dual operators: m_+ and m_- are ratios of coordinates of the slowest
// decaying solutions u^+ (at +infinity) and u^- (at -infinity) in a centre
// basis fixed at real E, namely an orthonormal basis of the intersection of
// the forward and backward (d+1)-dominant subspaces. For d = 1 the centre is
// the whole state space and the standard basis is used.
std::vector<ReflectionlessPoint> reflectionless_residual_dual(
    const TrigPolynomial& v, const TrigPolynomial& w, double alpha,
    const std::vector<double>& energies, const std::vector<double>& deltas,
    const std::vector<double>& phases, long n_tail = 2000);

}  // namespace qplab
