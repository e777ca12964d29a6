#include "qplab/cocycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <type_traits>

#include "qplab/duality.hpp"
#include "qplab/error.hpp"
#include "qplab/parallel.hpp"

namespace qplab {

namespace {

struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

double strip_of(const CocycleFamily& f) {
  return std::visit(
      [](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, SchrodingerFamily>) {
          return fam.v.strip_width();
        } else if constexpr (std::is_same_v<T, ConstantFamily>) {
          return std::numeric_limits<double>::infinity();
        } else {
          return fam.w.strip_width();
        }
      },
      f);
}

int dim_of(const CocycleFamily& f) {
  return std::visit(
      [](const auto& fam) -> int {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, SchrodingerFamily>) {
          return 2;
        } else if constexpr (std::is_same_v<T, ConstantFamily>) {
          return static_cast<int>(fam.M.rows());
        } else {
          return 2 * fam.v.degree();
        }
      },
      f);
}

// Phase on the circle advanced in extended precision.
class PhaseWalker {
 public:
  PhaseWalker(double x0, long double shift) : shift_(shift - std::floor(shift)) {
    x_ = static_cast<long double>(x0) - std::floor(static_cast<long double>(x0));
  }
  double value() const { return static_cast<double>(x_); }
  void advance() {
    x_ += shift_;
    if (x_ >= 1.0L) x_ -= 1.0L;
  }

 private:
  long double x_;
  long double shift_;
};

// Modified Gram-Schmidt with one reorthogonalisation pass; writes ln R_jj.
void orthonormalize(MatC& Y, double* log_diag) {
  const Eigen::Index k = Y.cols();
  for (Eigen::Index j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const cplx r = Y.col(i).dot(Y.col(j));
        Y.col(j) -= r * Y.col(i);
      }
    }
    const double nrm = Y.col(j).norm();
    require(nrm > 0.0 && std::isfinite(nrm), ErrorKind::NumericalQuality,
            "degenerate frame in re-orthonormalised product");
    Y.col(j) /= nrm;
    log_diag[j] = std::log(nrm);
  }
}

MatC initial_frame(int m, int k) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g(0.0, 1.0);
  MatC Y(m, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) Y(i, j) = cplx(g(rng), g(rng));
  }
  std::vector<double> scratch(k);
  orthonormalize(Y, scratch.data());
  return Y;
}

long double shift_of(const CocycleSpec& spec) {
  const long double a = spec.frequency().value();
  if (std::holds_alternative<DualBlockFamily>(spec.family())) {
    return a * std::get<DualBlockFamily>(spec.family()).v.degree();
  }
  return a;
}

double schrodinger_top(const SchrodingerFamily& fam, double x, long double shift, double eps,
                       long n, long warmup) {
  OrbitEvaluator orbit(fam.v, x, static_cast<double>(shift), eps);
  cplx a = cplx(0.6, 0.2), b = cplx(-0.3, 0.7);
  NeumaierSum acc;
  for (long t = 0; t < warmup + n; ++t) {
    const cplx na = (fam.E - orbit.value()) * a - b;
    b = a;
    a = na;
    const double nrm = std::sqrt(std::norm(a) + std::norm(b));
    require(nrm > 0.0 && std::isfinite(nrm), ErrorKind::NumericalQuality,
            "transfer-matrix product left the floating-point range");
    a /= nrm;
    b /= nrm;
    if (t >= warmup) acc.add(std::log(nrm));
    orbit.advance();
  }
  return acc.value();
}

}  // namespace

CocycleSpec::CocycleSpec(Frequency alpha, CocycleFamily family, double eps)
    : alpha_(std::move(alpha)),
      alpha_value_(alpha_.value_d()),
      family_(std::move(family)),
      eps_(eps),
      dim_(dim_of(family_)) {
  require(std::isfinite(eps) && std::abs(eps) < strip_of(family_), ErrorKind::Domain,
          "|eps| must be below the strip width");
  if (auto* c = std::get_if<ConstantFamily>(&family_)) {
    require(c->M.rows() == c->M.cols() && c->M.rows() > 0, ErrorKind::Shape,
            "constant cocycle must be square");
  }
  if (std::holds_alternative<DualFiniteRangeFamily>(family_) ||
      std::holds_alternative<DualBlockFamily>(family_)) {
    require(dim_ >= 2, ErrorKind::Domain, "dual cocycle needs a hopping of degree >= 1");
  }
}

CocycleSpec CocycleSpec::schrodinger(const Frequency& alpha, const TrigPolynomial& v, cplx E,
                                     double eps) {
  return CocycleSpec(alpha, SchrodingerFamily{v, E}, eps);
}

CocycleSpec CocycleSpec::constant(const Frequency& alpha, const MatC& M) {
  return CocycleSpec(alpha, ConstantFamily{M}, 0.0);
}

CocycleSpec CocycleSpec::dual(const Frequency& alpha, const TrigPolynomial& v,
                              const TrigPolynomial& w, cplx E, double eps) {
  return CocycleSpec(alpha, DualFiniteRangeFamily{v, w, E}, eps);
}

CocycleSpec CocycleSpec::dual_block(const Frequency& alpha, const TrigPolynomial& v,
                                    const TrigPolynomial& w, cplx E, double eps) {
  return CocycleSpec(alpha, DualBlockFamily{v, w, E}, eps);
}

double CocycleSpec::shift() const { return static_cast<double>(shift_of(*this)); }

CocycleSpec CocycleSpec::with_eps(double eps) const { return CocycleSpec(alpha_, family_, eps); }

CocycleSpec CocycleSpec::with_energy(cplx E) const {
  CocycleFamily f = family_;
  std::visit(
      [E](auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (!std::is_same_v<T, ConstantFamily>) fam.E = E;
      },
      f);
  return CocycleSpec(alpha_, std::move(f), eps_);
}

void CocycleSpec::step(double x, MatC& out) const {
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, SchrodingerFamily>) {
          out.resize(2, 2);
          out(0, 0) = fam.E - fam.v(x, eps_);
          out(0, 1) = -1.0;
          out(1, 0) = 1.0;
          out(1, 1) = 0.0;
        } else if constexpr (std::is_same_v<T, ConstantFamily>) {
          out = fam.M;
        } else if constexpr (std::is_same_v<T, DualFiniteRangeFamily>) {
          out = dual_step(fam.v, fam.w, fam.E, x, eps_);
        } else {
          out = dual_block_step(fam.v, fam.w, fam.E, x, alpha_value_, eps_);
        }
      },
      family_);
}

MatC CocycleSpec::step(double x) const {
  MatC out;
  step(x, out);
  return out;
}

void CocycleSpec::step_inverse(double x, MatC& out) const {
  if (const auto* s = std::get_if<SchrodingerFamily>(&family_)) {
    out.resize(2, 2);
    out(0, 0) = 0.0;
    out(0, 1) = 1.0;
    out(1, 0) = -1.0;
    out(1, 1) = s->E - s->v(x, eps_);
    return;
  }
  MatC a;
  step(x, a);
  Eigen::FullPivLU<MatC> lu(a);
  require(lu.isInvertible(), ErrorKind::NumericalQuality, "step matrix is singular");
  out = lu.inverse();
}

Eigen::Matrix2cd schrodinger_step(const TrigPolynomial& v, cplx E, double x, double eps) {
  require(std::isfinite(eps) && std::abs(eps) < v.strip_width(), ErrorKind::Domain,
          "|eps| must be below the strip width");
  Eigen::Matrix2cd m;
  m << E - v(x, eps), -1.0, 1.0, 0.0;
  return m;
}

MatC iterate(const CocycleSpec& spec, double x0, long n) {
  const int m = spec.dim();
  MatC result = MatC::Identity(m, m);
  MatC a;
  const long double shift = shift_of(spec);
  if (n >= 0) {
    PhaseWalker x(x0, shift);
    for (long j = 0; j < n; ++j) {
      spec.step(x.value(), a);
      result = a * result;
      x.advance();
    }
  } else {
    PhaseWalker x(x0, -shift);
    for (long j = 1; j <= -n; ++j) {
      x.advance();
      spec.step_inverse(x.value(), a);
      result = a * result;
    }
  }
  return result;
}

double symplectic_defect(const MatC& M, const MatC& S) {
  require(M.rows() == M.cols() && S.rows() == S.cols() && M.rows() == S.rows(), ErrorKind::Shape,
          "symplectic_defect: dimension mismatch");
  return operator_norm(M.adjoint() * S * M - S);
}

std::vector<double> phase_lattice(double x0, std::size_t count) {
  require(count >= 1, ErrorKind::Domain, "need at least one phase");
  std::vector<double> xs(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = x0 + static_cast<double>(j) / static_cast<double>(count);
    xs[j] = x - std::floor(x);
  }
  return xs;
}

std::vector<double> log_growth(const CocycleSpec& spec, double x, long n, int k, long warmup) {
  const int m = spec.dim();
  require(k >= 1 && k <= m, ErrorKind::Domain, "k must lie in [1, m]");
  require(n >= 1 && warmup >= 0, ErrorKind::Domain, "n must be positive");
  const long double shift = shift_of(spec);

  if (k == 1) {
    if (const auto* s = std::get_if<SchrodingerFamily>(&spec.family())) {
      return {schrodinger_top(*s, x, shift, spec.eps(), n, warmup)};
    }
  }

  MatC Q = initial_frame(m, k);
  MatC A, Y;
  std::vector<double> logs(k);
  std::vector<NeumaierSum> acc(k);
  PhaseWalker phase(x, shift);
  for (long t = 0; t < warmup + n; ++t) {
    spec.step(phase.value(), A);
    Y.noalias() = A * Q;
    orthonormalize(Y, logs.data());
    Q.swap(Y);
    if (t >= warmup) {
      for (int j = 0; j < k; ++j) acc[j].add(logs[j]);
    }
    phase.advance();
  }
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) out[j] = acc[j].value();
  return out;
}

std::vector<std::vector<double>> log_growth_checkpoints(const CocycleSpec& spec, double x,
                                                        const std::vector<long>& checkpoints,
                                                        int k) {
  const int m = spec.dim();
  require(k >= 1 && k <= m, ErrorKind::Domain, "k must lie in [1, m]");
  require(!checkpoints.empty() && std::is_sorted(checkpoints.begin(), checkpoints.end()) &&
              checkpoints.front() >= 1,
          ErrorKind::Domain, "checkpoints must be increasing and positive");
  MatC Q = MatC::Identity(m, m).leftCols(k);
  MatC A, Y;
  std::vector<double> logs(k);
  std::vector<NeumaierSum> acc(k);
  std::vector<std::vector<double>> out;
  out.reserve(checkpoints.size());
  PhaseWalker phase(x, shift_of(spec));
  std::size_t next = 0;
  for (long t = 1; next < checkpoints.size(); ++t) {
    spec.step(phase.value(), A);
    Y.noalias() = A * Q;
    orthonormalize(Y, logs.data());
    Q.swap(Y);
    for (int j = 0; j < k; ++j) acc[j].add(logs[j]);
    phase.advance();
    while (next < checkpoints.size() && checkpoints[next] == t) {
      std::vector<double> row(k);
      for (int j = 0; j < k; ++j) row[j] = acc[j].value();
      out.push_back(std::move(row));
      ++next;
    }
  }
  return out;
}

LyapunovEstimate lyapunov_spectrum(const CocycleSpec& spec, long n,
                                   const std::vector<double>& phases, int k, long warmup) {
  require(!phases.empty(), ErrorKind::InsufficientData, "need at least one phase");
  require(n >= 1, ErrorKind::Domain, "n must be positive");
  if (warmup < 0) warmup = std::min<long>(n / 10, 1000);

  LyapunovEstimate est;
  est.n_steps = n;
  est.phase_samples = phases.size();
  est.short_run = n < 100;
  est.per_phase.resize(phases.size());
  parallel_for(phases.size(), [&](std::size_t i) {
    auto sums = log_growth(spec, phases[i], n, k, warmup);
    for (auto& s : sums) s /= static_cast<double>(n);
    est.per_phase[i] = std::move(sums);
  });

  const double P = static_cast<double>(phases.size());
  est.exponents.assign(k, 0.0);
  est.stderr_.assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    NeumaierSum s;
    for (const auto& row : est.per_phase) s.add(row[j]);
    const double mean = s.value() / P;
    double var = 0.0;
    for (const auto& row : est.per_phase) var += (row[j] - mean) * (row[j] - mean);
    est.exponents[j] = mean;
    est.stderr_[j] = phases.size() > 1 ? std::sqrt(var / (P - 1.0)) / std::sqrt(P) : 0.0;
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return est.exponents[a] > est.exponents[b]; });
  std::vector<double> e(k), s(k);
  for (int j = 0; j < k; ++j) {
    e[j] = est.exponents[order[j]];
    s[j] = est.stderr_[order[j]];
  }
  est.exponents = std::move(e);
  est.stderr_ = std::move(s);
  return est;
}

}  // namespace qplab
