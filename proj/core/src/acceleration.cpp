#include "qplab/acceleration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qplab/error.hpp"
#include "qplab/parallel.hpp"

namespace qplab {

namespace {

constexpr double kSigmaFloor = 1e-3;
constexpr double kConvexFloor = 1e-3;

// Weighted prefix sums for O(1) block costs.
struct Moments {
  std::vector<double> w, we, we2, wl, wl2, wle;

  explicit Moments(const EpsilonProfile& p) {
    const std::size_t m = p.eps_samples.size();
    w.assign(m + 1, 0.0);
    we = wl = we2 = wl2 = wle = w;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = std::max(p.stderrs[i], kSigmaFloor);
      const double wi = 1.0 / (s * s);
      const double e = p.eps_samples[i], l = p.L_samples[i];
      w[i + 1] = w[i] + wi;
      we[i + 1] = we[i] + wi * e;
      we2[i + 1] = we2[i] + wi * e * e;
      wl[i + 1] = wl[i] + wi * l;
      wl2[i + 1] = wl2[i] + wi * l * l;
      wle[i + 1] = wle[i] + wi * l * e;
    }
  }

  // Samples [a, b) fitted by L = 2 pi j eps + c with the best c.
  std::pair<double, double> cost(std::size_t a, std::size_t b, int j) const {
    const double g = kTwoPi * j;
    const double sw = w[b] - w[a];
    const double sy = (wl[b] - wl[a]) - g * (we[b] - we[a]);
    const double sy2 = (wl2[b] - wl2[a]) - 2.0 * g * (wle[b] - wle[a]) + g * g * (we2[b] - we2[a]);
    const double c = sy / sw;
    return {std::max(0.0, sy2 - sy * c), c};
  }

  double raw_slope(std::size_t a, std::size_t b) const {
    const double sw = w[b] - w[a];
    const double me = (we[b] - we[a]) / sw;
    const double sxx = (we2[b] - we2[a]) - sw * me * me;
    const double sxy = (wle[b] - wle[a]) - me * (wl[b] - wl[a]);
    return sxx > 0.0 ? sxy / sxx / kTwoPi : std::numeric_limits<double>::quiet_NaN();
  }
};

void check_convex(const EpsilonProfile& p) {
  const auto& e = p.eps_samples;
  const auto& l = p.L_samples;
  const auto& s = p.stderrs;
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    const double t = (e[i] - e[i - 1]) / (e[i + 1] - e[i - 1]);
    const double chord = (1.0 - t) * l[i - 1] + t * l[i + 1];
    const double tol =
        3.0 * std::sqrt(s[i - 1] * s[i - 1] + s[i] * s[i] + s[i + 1] * s[i + 1]) + kConvexFloor;
    if (l[i] > chord + tol) {
      fail(ErrorKind::DataQuality,
           "profile samples are not convex near eps=" + std::to_string(e[i]));
    }
  }
}

}  // namespace

std::vector<double> default_eps_grid(double h) {
  require(h > 0.0 && std::isfinite(h), ErrorKind::Domain, "strip width must be positive");
  std::vector<double> g{0.0};
  const double lo = 0.005 * h, hi = 0.05 * h;
  for (int i = 0; i < 8; ++i) g.push_back(lo * std::pow(hi / lo, i / 7.0));
  for (int i = 1; i <= 15; ++i) g.push_back(hi + (0.6 * h - hi) * i / 15.0);
  return g;
}

double EpsilonProfile::fitted_value(double eps) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < slopes_quantized.size(); ++b) {
    best = std::max(best, kTwoPi * slopes_quantized[b] * eps + intercepts[b]);
  }
  return best;
}

EpsilonProfile sample_profile(const TrigPolynomial& v, const Frequency& alpha, double E,
                              const std::vector<double>& eps_grid, long n,
                              const std::vector<double>& phases, long warmup) {
  require(eps_grid.size() >= 8, ErrorKind::InsufficientData, "eps grid needs at least 8 points");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    require(eps_grid[i] >= 0.0 && eps_grid[i] < v.strip_width(), ErrorKind::Domain,
            "eps grid must lie in [0, strip_width)");
    require(i == 0 || eps_grid[i] > eps_grid[i - 1], ErrorKind::Domain,
            "eps grid must be increasing");
  }
  EpsilonProfile p;
  p.E = E;
  p.eps_samples = eps_grid;
  p.L_samples.resize(eps_grid.size());
  p.stderrs.resize(eps_grid.size());
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const auto spec = CocycleSpec::schrodinger(alpha, v, E, eps_grid[i]);
    const auto est = lyapunov_spectrum(spec, n, phases, 1, warmup);
    p.L_samples[i] = est.exponents[0];
    p.stderrs[i] = est.stderr_[0];
  }
  return p;
}

EpsilonProfile fit_profile(EpsilonProfile p, double slope_tol, int max_slope) {
  const std::size_t m = p.eps_samples.size();
  require(m >= 2 && p.L_samples.size() == m && p.stderrs.size() == m, ErrorKind::InsufficientData,
          "profile needs matching samples");
  require(max_slope >= 0, ErrorKind::Domain, "max_slope must be nonnegative");
  check_convex(p);

  const Moments mom(p);
  const int J = max_slope + 1;
  const double penalty = 2.0 * std::log(static_cast<double>(m));
  const double inf = std::numeric_limits<double>::infinity();
  // best[e][j]: samples [0, e) fitted with last piece slope j ending at e.
  std::vector<std::vector<double>> best(m + 1, std::vector<double>(J, inf));
  std::vector<std::vector<std::pair<std::size_t, int>>> from(
      m + 1, std::vector<std::pair<std::size_t, int>>(J, {0, -1}));
  for (std::size_t e = 2; e <= m; ++e) {
    for (int j = 0; j < J; ++j) {
      double b = mom.cost(0, e, j).first;
      std::pair<std::size_t, int> arg{0, -1};
      for (std::size_t s = 2; s + 2 <= e; ++s) {
        for (int jp = 0; jp < j; ++jp) {
          if (best[s][jp] == inf) continue;
          const double c = best[s][jp] + mom.cost(s, e, j).first + penalty;
          if (c < b) {
            b = c;
            arg = {s, jp};
          }
        }
      }
      best[e][j] = b;
      from[e][j] = arg;
    }
  }
  int jbest = 0;
  for (int j = 1; j < J; ++j) {
    if (best[m][j] < best[m][jbest]) jbest = j;
  }

  std::vector<std::pair<std::size_t, int>> pieces;  // (start, slope), reversed
  std::size_t e = m;
  int j = jbest;
  while (true) {
    const auto [s, jp] = from[e][j];
    pieces.push_back({s, j});
    if (jp < 0) break;
    e = s;
    j = jp;
  }
  std::reverse(pieces.begin(), pieces.end());

  p.max_slope = max_slope;
  p.piece_start.clear();
  p.slopes_quantized.clear();
  p.slopes_raw.clear();
  p.intercepts.clear();
  p.breakpoints.clear();
  p.quantization_failure = false;
  p.max_slope_deviation = 0.0;
  for (std::size_t b = 0; b < pieces.size(); ++b) {
    const std::size_t a = pieces[b].first;
    const std::size_t z = b + 1 < pieces.size() ? pieces[b + 1].first : m;
    const int jq = pieces[b].second;
    p.piece_start.push_back(a);
    p.slopes_quantized.push_back(jq);
    p.intercepts.push_back(mom.cost(a, z, jq).second);
    const double raw = mom.raw_slope(a, z);
    p.slopes_raw.push_back(raw);
    if (std::isfinite(raw)) {
      const double dev = std::abs(raw - jq);
      p.max_slope_deviation = std::max(p.max_slope_deviation, dev);
      if (std::abs(raw - std::round(raw)) > slope_tol || dev > slope_tol) {
        p.quantization_failure = true;
      }
    }
  }
  for (std::size_t b = 0; b + 1 < pieces.size(); ++b) {
    const double dj = p.slopes_quantized[b + 1] - p.slopes_quantized[b];
    p.breakpoints.push_back((p.intercepts[b] - p.intercepts[b + 1]) / (kTwoPi * dj));
  }

  p.omega = p.slopes_quantized.front();
  if (p.omega > 0) {
    p.omega_bar = p.omega;
    p.eps1 = 0.0;
  } else if (p.slopes_quantized.size() >= 2) {
    p.omega_bar = p.slopes_quantized[1];
    p.eps1 = p.breakpoints.front();
  } else {
    p.omega_bar = 1;
    p.eps1.reset();
  }
  p.fitted = true;
  return p;
}

AccelerationResult accelerations(const TrigPolynomial& v, const Frequency& alpha, double E,
                                 const ProfileConfig& config) {
  const std::vector<double> grid =
      config.eps_grid.empty() ? default_eps_grid(v.strip_width()) : config.eps_grid;
  const auto phases = phase_lattice(config.x0, config.phases);
  EpsilonProfile p = sample_profile(v, alpha, E, grid, config.n, phases, config.warmup);
  p = fit_profile(std::move(p), config.slope_tol, std::max(1, v.degree()));
  AccelerationResult r;
  r.omega = p.omega;
  r.omega_bar = p.omega_bar;
  r.eps1 = p.eps1;
  r.decided = !p.quantization_failure;
  r.profile = std::move(p);
  return r;
}

Type1Verdict classify_type1(const TrigPolynomial& v, const Frequency& alpha,
                            const std::vector<double>& energies, const ProfileConfig& config) {
  Type1Verdict out;
  out.empty_sample = energies.empty();
  out.records.resize(energies.size());
  parallel_for(energies.size(), [&](std::size_t i) {
    Type1Record rec;
    rec.E = energies[i];
    try {
      const auto acc = accelerations(v, alpha, energies[i], config);
      rec.omega = acc.omega;
      rec.omega_bar = acc.omega_bar;
      rec.quantization_flag = acc.profile.quantization_failure;
      rec.undecided = !acc.decided;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DataQuality) throw;
      rec.undecided = true;
    }
    rec.is_type1 = !rec.undecided && rec.omega_bar == 1;
    out.records[i] = rec;
  });
  for (const auto& rec : out.records) {
    if (rec.undecided) {
      out.undecided.push_back(rec.E);
    } else if (!rec.is_type1) {
      out.failures.push_back(rec.E);
    }
  }
  out.operator_type1 = out.failures.empty() && out.undecided.empty();
  return out;
}

}  // namespace qplab
