#include "qplab_cli/run.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "qplab/acceleration.hpp"
#include "qplab/cohomology.hpp"
#include "qplab/duality.hpp"
#include "qplab/error.hpp"
#include "qplab/kotani.hpp"
#include "qplab/parallel.hpp"
#include "qplab/spectrum.hpp"

namespace qplab::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(long x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) fail(ErrorKind::Domain, "cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::vector<double> lattice(const RunConfig& c, std::size_t count) {
  return phase_lattice(c.phase_offset(), count);
}

std::vector<double> resolve_energies(const RunConfig& c, const TrigPolynomial& v,
                                     const Frequency& alpha) {
  if (!c.energies.empty()) return c.energies;
  if (!c.energy_range.empty()) {
    std::vector<double> e(c.energy_count);
    for (std::size_t i = 0; i < c.energy_count; ++i) {
      e[i] = c.energy_count == 1 ? c.energy_range[0]
                                 : c.energy_range[0] + (c.energy_range[1] - c.energy_range[0]) *
                                                           static_cast<double>(i) /
                                                           static_cast<double>(c.energy_count - 1);
    }
    return e;
  }
  const auto s = truncated_spectrum(SchrodingerOperator{v}, alpha.value_d(), c.N,
                                    lattice(c, std::min<std::size_t>(c.phases, 8)));
  return spectral_samples(s, c.energy_count);
}

int butterfly(const RunConfig& c, const fs::path& dir) {
  const auto v = c.potential.build();
  std::vector<std::pair<std::int64_t, std::int64_t>> pq;
  for (std::int64_t q = 1; q <= c.q_max; ++q) {
    for (std::int64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) == 1) pq.push_back({p, q});
    }
  }
  std::vector<SpectrumApprox> bands(pq.size());
  parallel_for(pq.size(), [&](std::size_t i) {
    bands[i] = schrodinger_bands(v, pq[i].first, pq[i].second, c.bloch_phases, c.phase_offset());
  });
  Csv csv(dir / "butterfly.csv", {"p", "q", "band_index", "E_left", "E_right"});
  for (std::size_t i = 0; i < pq.size(); ++i) {
    for (std::size_t b = 0; b < bands[i].bands.size(); ++b) {
      csv.row({num(static_cast<long>(pq[i].first)), num(static_cast<long>(pq[i].second)),
               num(static_cast<long>(b)), num(bands[i].bands[b].first),
               num(bands[i].bands[b].second)});
    }
  }
  return kExitOk;
}

int profile(const RunConfig& c, const fs::path& dir) {
  const auto v = c.potential.build();
  const auto alpha = c.frequency.build();
  const auto energies = resolve_energies(c, v, alpha);
  const auto grid = c.eps_grid.empty() ? default_eps_grid(v.strip_width()) : c.eps_grid;
  const auto phases = lattice(c, c.phases);
  std::vector<EpsilonProfile> profiles(energies.size());
  parallel_for(energies.size(), [&](std::size_t i) {
    profiles[i] = sample_profile(v, alpha, energies[i], grid, c.n, phases);
  });
  Csv csv(dir / "profile.csv", {"E", "eps", "L", "stderr"});
  for (const auto& p : profiles) {
    for (std::size_t k = 0; k < p.eps_samples.size(); ++k) {
      csv.row({num(p.E), num(p.eps_samples[k]), num(p.L_samples[k]), num(p.stderrs[k])});
    }
  }
  return kExitOk;
}

int classify(const RunConfig& c, const fs::path& dir) {
  const auto v = c.potential.build();
  const auto alpha = c.frequency.build();
  ProfileConfig pc;
  pc.eps_grid = c.eps_grid;
  pc.n = c.n;
  pc.phases = c.phases;
  pc.x0 = c.phase_offset();
  pc.slope_tol = c.slope_tol;
  const auto verdict = classify_type1(v, alpha, resolve_energies(c, v, alpha), pc);
  Csv csv(dir / "classify.csv", {"E", "omega", "omega_bar", "is_type1", "quantization_flag"});
  for (const auto& r : verdict.records) {
    csv.row({num(r.E), num(static_cast<long>(r.omega)), num(static_cast<long>(r.omega_bar)),
             flag(r.is_type1), flag(r.quantization_flag)});
  }
  return kExitOk;
}

int dual(const RunConfig& c, const fs::path& dir) {
  const auto v = c.potential.build();
  const auto w = c.dual_potential.build();
  const auto alpha = c.frequency.build();
  require(v.degree() >= 1, ErrorKind::Domain, "dual needs a nonconstant potential");
  const auto energies = resolve_energies(c, v, alpha);
  const auto phases = lattice(c, c.phases);
  DualOptions opts;
  opts.simplicity_floor = c.simplicity_floor;
  std::vector<DualSpectrumRecord> recs(energies.size());
  parallel_for(energies.size(), [&](std::size_t i) {
    recs[i] = dual_lyapunov(v, w, alpha, energies[i], c.n, phases, opts);
  });
  std::vector<std::string> header{"E"};
  for (int j = 1; j <= v.degree(); ++j) header.push_back("gamma_" + std::to_string(j));
  header.push_back("gap12");
  header.push_back("simple");
  Csv csv(dir / "dual.csv", header);
  for (const auto& r : recs) {
    std::vector<std::string> row{num(r.E)};
    for (double g : r.gammas) row.push_back(num(g));
    row.push_back(num(r.gap12));
    row.push_back(flag(r.simple));
    csv.row(row);
  }
  return kExitOk;
}

int spectrum(const RunConfig& c, const fs::path& dir) {
  const auto v = c.potential.build();
  const double alpha = c.frequency.build().value_d();
  GapOptions go;
  go.k_max = c.k_max;
  go.min_gap = c.min_gap;
  go.label_tol = c.label_tol;
  const auto s = detect_and_label_gaps(
      truncated_spectrum(SchrodingerOperator{v}, alpha, c.N, lattice(c, c.phases)), alpha, go);
  Csv pts(dir / "spectrum_points.csv", {"E"});
  for (double e : s.points) pts.row({num(e)});
  Csv gaps(dir / "spectrum_gaps.csv", {"E_left", "E_right", "ids", "label", "residual"});
  for (const auto& g : s.gaps) {
    gaps.row({num(g.left), num(g.right), num(g.ids),
              g.label ? num(static_cast<long>(*g.label)) : std::string(), num(g.residual)});
  }
  return kExitOk;
}

int kotani(const RunConfig& c, const fs::path& dir) {
  const auto v = c.potential.build();
  const auto alpha = c.frequency.build();
  const auto energies = resolve_energies(c, v, alpha);
  const auto rows = reflectionless_residual(v, alpha.value_d(), energies, c.deltas, lattice(c, c.phases));
  Csv csv(dir / "kotani.csv", {"E", "delta", "median", "mean", "max"});
  for (const auto& r : rows) csv.row({num(r.E), num(r.delta), num(r.median), num(r.mean), num(r.max)});
  return kExitOk;
}

int cohomology(const RunConfig& c, const fs::path& dir) {
  const auto alpha = c.frequency.build();
  const auto psi = c.psi.kind == "cosine" ? AnalyticObservable::cosine(c.psi.amplitude, c.h)
                                          : AnalyticObservable::geometric(c.psi.rate, c.h);
  const auto cf = cf_expand(alpha, 64);
  std::vector<std::size_t> ks = c.k_indices;
  if (ks.empty()) {
    for (std::size_t k = 1; k + 1 < cf.convergents.size(); ++k) ks.push_back(k);
  }
  Csv csv(dir / "cohomology.csv",
          {"n", "q_n", "q_next", "N", "g_norm_l1", "g_norm_grid", "g_bound", "residual_norm",
           "residual_bound", "identity_error", "regime_applies", "g_bound_holds",
           "residual_bound_holds"});
  bool ok = true;
  for (std::size_t k : ks) {
    const auto sol = solve_truncated(psi, alpha, cf, k, c.h);
    const auto& r = sol.report;
    csv.row({num(static_cast<long>(k)), to_string(cf.q(k)), to_string(cf.q(k + 1)), num(r.N),
             num(r.g_norm_l1), num(r.g_norm_grid), num(r.g_bound), num(r.residual_norm),
             num(r.residual_bound), num(r.identity_error), flag(r.regime_applies),
             flag(r.g_bound_holds), flag(r.residual_bound_holds)});
    if (!r.residual_bound_holds || r.identity_error > 1e-14) ok = false;
    if (r.regime_applies && !r.g_bound_holds) ok = false;
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run(const RunConfig& config, const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    nlohmann::json echo = config.resolved();
    echo["qplab_version"] = QPLAB_VERSION;
    std::ofstream f(dir / "resolved_config.json", std::ios::binary);
    f << echo.dump(2) << '\n';
  }
  const auto& cmd = config.command;
  if (cmd == "butterfly") return butterfly(config, dir);
  if (cmd == "profile") return profile(config, dir);
  if (cmd == "classify") return classify(config, dir);
  if (cmd == "dual") return dual(config, dir);
  if (cmd == "spectrum") return spectrum(config, dir);
  if (cmd == "kotani") return kotani(config, dir);
  if (cmd == "cohomology") return cohomology(config, dir);
  throw ConfigError("$.command", "unknown command '" + cmd + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::Convergence:
      case ErrorKind::Conditioning:
      case ErrorKind::DataQuality:
      case ErrorKind::NumericalQuality:
        return kExitNumerical;
      default:
        return kExitConfig;
    }
  }
  return kExitNumerical;
}

}  // namespace qplab::cli
