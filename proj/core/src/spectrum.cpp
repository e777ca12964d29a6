#include "qplab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qplab/arithmetic.hpp"
#include "qplab/error.hpp"
#include "qplab/linalg.hpp"
#include "qplab/parallel.hpp"

namespace qplab {

namespace {

BandedHermitian assemble(const OperatorSpec& op, double alpha, int N, double phase) {
  if (const auto* s = std::get_if<SchrodingerOperator>(&op)) {
    BandedHermitian h(N, 1);
    OrbitEvaluator orbit(s->v, phase, alpha, 0.0);
    for (int i = 0; i < N; ++i, orbit.advance()) h.lower[0][i] = orbit.value().real();
    for (int i = 0; i + 1 < N; ++i) h.lower[1][i] = 1.0;
    return h;
  }
  const auto& d = std::get<DualOperator>(op);
  const int bw = d.v.degree();
  require(bw >= 1 && N > bw, ErrorKind::Domain, "dual truncation needs N > degree >= 1");
  BandedHermitian h(N, bw);
  OrbitEvaluator orbit(d.w, phase, alpha, 0.0);
  for (int i = 0; i < N; ++i, orbit.advance()) {
    h.lower[0][i] = orbit.value().real() + d.v.coeff(0).real();
  }
  for (int k = 1; k <= bw; ++k) {
    for (int i = 0; i + k < N; ++i) h.lower[k][i] = d.v.coeff(-k);
  }
  return h;
}

std::vector<double> interior_values(const EigenSystem& es, int N) {
  const int window = std::max(1, std::min(N / 2, std::max(4, N / 10)));
  std::vector<double> out;
  out.reserve(es.values.size());
  for (std::size_t j = 0; j < es.values.size(); ++j) {
    double edge = 0.0;
    for (int i = 0; i < window; ++i) {
      edge += std::norm(es.vectors(i, j)) + std::norm(es.vectors(N - 1 - i, j));
    }
    if (edge <= 0.5) out.push_back(es.values[j]);
  }
  return out;
}

std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& b : iv) {
    if (!out.empty() && b.first <= out.back().second) {
      out.back().second = std::max(out.back().second, b.second);
    } else {
      out.push_back(b);
    }
  }
  return out;
}

std::vector<double> bloch_eigenvalues(const TrigPolynomial& v, double alpha, std::int64_t q,
                                      double phase, double sign) {
  const int n = static_cast<int>(q);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) H(i, i) = v(phase + i * alpha).real();
  for (int i = 0; i + 1 < n; ++i) H(i, i + 1) = H(i + 1, i) = 1.0;
  if (n == 1) {
    H(0, 0) += 2.0 * sign;
  } else {
    H(0, n - 1) += sign;
    H(n - 1, 0) += sign;
  }
  return eigvalsh_dense(H);
}

}  // namespace

SpectrumApprox truncated_spectrum(const OperatorSpec& op, double alpha, int N,
                                  const std::vector<double>& phases) {
  require(N >= 2, ErrorKind::Domain, "truncation size must be at least 2");
  require(!phases.empty(), ErrorKind::InsufficientData, "need at least one phase");
  std::vector<std::vector<double>> interior(phases.size()), all(phases.size());
  parallel_for(phases.size(), [&](std::size_t p) {
    const EigenSystem es = eigh_banded(assemble(op, alpha, N, phases[p]), true);
    interior[p] = interior_values(es, N);
    all[p] = es.values;
  });
  SpectrumApprox s;
  s.truncation = static_cast<std::size_t>(N);
  s.phase_count = phases.size();
  s.reliable = N >= 50;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    s.points.insert(s.points.end(), interior[p].begin(), interior[p].end());
    s.all_points.insert(s.all_points.end(), all[p].begin(), all[p].end());
  }
  std::sort(s.points.begin(), s.points.end());
  std::sort(s.all_points.begin(), s.all_points.end());
  return s;
}

SpectrumApprox schrodinger_bands(const TrigPolynomial& v, std::int64_t p, std::int64_t q,
                                 int bloch_phases, double x0) {
  require(q >= 1 && p >= 0 && p < std::max<std::int64_t>(q, 1), ErrorKind::Domain,
          "need 0 <= p < q");
  require(std::gcd(p, q) == 1, ErrorKind::Domain, "p/q must be in lowest terms");
  require(q <= 2000, ErrorKind::Size, "q must not exceed 2000");
  require(bloch_phases >= 1, ErrorKind::InsufficientData, "need at least one phase");
  const double alpha = static_cast<double>(p) / static_cast<double>(q);
  // The spectrum at x + 1/q equals the one at x, so phases cover [0, 1/q).
  std::vector<double> phases(bloch_phases);
  for (int j = 0; j < bloch_phases; ++j) {
    phases[j] = x0 + static_cast<double>(j) / (static_cast<double>(bloch_phases) * q);
  }

  std::vector<std::vector<std::pair<double, double>>> per(phases.size());
  parallel_for(phases.size(), [&](std::size_t k) {
    std::vector<double> edges = bloch_eigenvalues(v, alpha, q, phases[k], 1.0);
    const auto anti = bloch_eigenvalues(v, alpha, q, phases[k], -1.0);
    edges.insert(edges.end(), anti.begin(), anti.end());
    std::sort(edges.begin(), edges.end());
    for (std::size_t j = 0; j + 1 < edges.size(); j += 2) per[k].push_back({edges[j], edges[j + 1]});
  });
  SpectrumApprox s;
  s.truncation = static_cast<std::size_t>(q);
  s.phase_count = phases.size();
  s.reliable = true;
  std::vector<std::pair<double, double>> all;
  for (const auto& b : per) all.insert(all.end(), b.begin(), b.end());
  s.bands = phases.size() == 1 ? all : merge_intervals(all);
  for (const auto& b : s.bands) {
    s.points.push_back(b.first);
    s.points.push_back(b.second);
  }
  s.all_points = s.points;
  return s;
}

double ids_from_points(const SpectrumApprox& s, double E) {
  require(!s.all_points.empty(), ErrorKind::InsufficientData, "no eigenvalues to count");
  const auto it = std::upper_bound(s.all_points.begin(), s.all_points.end(), E);
  return static_cast<double>(it - s.all_points.begin()) / static_cast<double>(s.all_points.size());
}

double ids(const OperatorSpec& op, double alpha, double E, int N,
           const std::vector<double>& phases) {
  return ids_from_points(truncated_spectrum(op, alpha, N, phases), E);
}

RotationData rotation_number(const TrigPolynomial& v, double alpha, double E, long n,
                             const std::vector<double>& phases, int ids_N) {
  require(n >= 1, ErrorKind::Domain, "n must be positive");
  require(!phases.empty(), ErrorKind::InsufficientData, "need at least one phase");
  std::vector<double> mean_increment(phases.size());
  parallel_for(phases.size(), [&](std::size_t p) {
    OrbitEvaluator orbit(v, phases[p], alpha, 0.0);
    // Direction (x, y) with x >= 0, angle t in (-pi/2, pi/2]. The image
    // (a x - y, x) lies in the closed upper half plane, so its angle in
    // [0, pi] fixes a continuous lift of the increment.
    double x = 1.0, y = 0.0;
    double total = 0.0;
    for (long j = 0; j < n; ++j, orbit.advance()) {
      const double a = E - orbit.value().real();
      const double t = std::atan2(y, x);
      const double nx = a * x - y, ny = x;
      total += std::atan2(ny, nx) - t;
      const double r = std::hypot(nx, ny);
      x = nx / r;
      y = ny / r;
      if (x < 0.0 || (x == 0.0 && y < 0.0)) {
        x = -x;
        y = -y;
      }
    }
    mean_increment[p] = total / static_cast<double>(n);
  });
  double m = 0.0;
  for (double inc : mean_increment) m += inc;
  m /= static_cast<double>(phases.size());

  RotationData r;
  r.E = E;
  r.rho = std::clamp(m / kTwoPi, 0.0, 0.5);
  r.N = 1.0 - 2.0 * r.rho;
  if (ids_N > 0) {
    r.N_from_ids = ids(SchrodingerOperator{v}, alpha, E, ids_N, phases);
    r.rho_from_ids = 0.5 * (1.0 - r.N_from_ids);
    r.discrepancy = std::abs(r.N - r.N_from_ids);
  }
  return r;
}

SpectrumApprox detect_and_label_gaps(SpectrumApprox s, double alpha, const GapOptions& opts) {
  s.gaps.clear();
  const auto& pts = s.points;
  const long M = static_cast<long>(pts.size());
  // Spacing is measured per truncation: the merged cloud holds one copy of
  // each level per phase, so its raw spacing is rescaled by the phase count.
  const double P = static_cast<double>(std::max<std::size_t>(1, s.phase_count));
  const long W = std::max<long>(1, opts.spacing_window) * static_cast<long>(P);
  for (long i = 0; i + 1 < M; ++i) {
    const double width = pts[i + 1] - pts[i];
    if (width <= opts.min_gap) continue;
    double spacing = 0.0;
    int sides = 0;
    if (i - W >= 0) {
      spacing += (pts[i] - pts[i - W]) / W;
      ++sides;
    }
    if (i + 1 + W < M) {
      spacing += (pts[i + 1 + W] - pts[i + 1]) / W;
      ++sides;
    }
    if (sides == 0) continue;
    spacing *= P / sides;
    if (width <= std::max(opts.min_gap, 10.0 * spacing)) continue;

    Gap g;
    g.left = pts[i];
    g.right = pts[i + 1];
    g.ids = s.all_points.empty() ? static_cast<double>(i + 1) / static_cast<double>(M)
                                 : ids_from_points(s, 0.5 * (g.left + g.right));
    double best = 2.0;
    int best_k = 0;
    for (int a = 0; a <= opts.k_max; ++a) {
      for (int k : {a, -a}) {
        const double r = static_cast<double>(dist_to_int(g.ids - static_cast<long double>(k) * alpha));
        if (r < best) {
          best = r;
          best_k = k;
        }
        if (a == 0) break;
      }
    }
    g.residual = best;
    if (best <= opts.label_tol) g.label = best_k;
    s.gaps.push_back(g);
  }
  return s;
}

double hausdorff_to_bands(const std::vector<double>& sorted_points,
                          const std::vector<std::pair<double, double>>& bands) {
  require(!sorted_points.empty() && !bands.empty(), ErrorKind::InsufficientData,
          "need points and bands");
  double d = 0.0;
  for (double x : sorted_points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [l, r] : bands) {
      best = std::min(best, x < l ? l - x : (x > r ? x - r : 0.0));
    }
    d = std::max(d, best);
  }
  for (const auto& [l, r] : bands) {
    d = std::max(d, distance_to_sorted(sorted_points, l));
    d = std::max(d, distance_to_sorted(sorted_points, r));
    auto it = std::lower_bound(sorted_points.begin(), sorted_points.end(), l);
    for (; it != sorted_points.end() && std::next(it) != sorted_points.end() && *std::next(it) <= r; ++it) {
      d = std::max(d, 0.5 * (*std::next(it) - *it));
    }
  }
  return d;
}

std::vector<double> spectral_samples(const SpectrumApprox& s, std::size_t count) {
  std::vector<double> out;
  if (count == 0 || s.points.empty()) return out;
  const std::size_t M = s.points.size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t idx = static_cast<std::size_t>((i + 0.5) * M / count);
    out.push_back(s.points[std::min(idx, M - 1)]);
  }
  return out;
}

}  // namespace qplab
