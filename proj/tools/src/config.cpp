#include "qplab_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace qplab::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(path + "." + it.key(), "unknown key");
  }
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

long get_integer(const json& j, const std::string& path, long lo, long hi) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  const long v = j.get<long>();
  if (v < lo || v > hi) {
    throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

double get_range(const json& j, const std::string& path, double lo, double hi) {
  const double v = get_number(j, path);
  if (v < lo || v > hi) {
    throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

PotentialSpec parse_potential(const json& j, const std::string& path) {
  expect_object(j, path);
  PotentialSpec p;
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ConfigError(path + ".family", "expected one of amo, extended_harper, free, fourier");
  }
  p.family = j["family"].get<std::string>();
  if (p.family == "amo") {
    reject_unknown(j, path, {"family", "lambda", "strip_width"});
    if (j.contains("lambda")) p.lambda = get_number(j["lambda"], path + ".lambda");
  } else if (p.family == "extended_harper") {
    reject_unknown(j, path, {"family", "a", "b", "strip_width"});
    if (j.contains("a")) p.a = get_number(j["a"], path + ".a");
    if (j.contains("b")) p.b = get_number(j["b"], path + ".b");
    if (p.b == 0.0) throw ConfigError(path + ".b", "must be nonzero (use amo for b = 0)");
  } else if (p.family == "free") {
    reject_unknown(j, path, {"family", "strip_width"});
  } else if (p.family == "fourier") {
    reject_unknown(j, path, {"family", "coefficients", "strip_width"});
    if (!j.contains("coefficients") || !j["coefficients"].is_array() || j["coefficients"].empty()) {
      throw ConfigError(path + ".coefficients", "expected a nonempty array c_0..c_d");
    }
    const auto& c = j["coefficients"];
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string cp = path + ".coefficients[" + std::to_string(i) + "]";
      if (c[i].is_number()) {
        p.coefficients.emplace_back(get_number(c[i], cp), 0.0);
      } else if (c[i].is_array() && c[i].size() == 2) {
        p.coefficients.emplace_back(get_number(c[i][0], cp + "[0]"), get_number(c[i][1], cp + "[1]"));
      } else {
        throw ConfigError(cp, "expected a number or [re, im]");
      }
    }
  } else {
    throw ConfigError(path + ".family", "unknown family '" + p.family + "'");
  }
  if (j.contains("strip_width")) {
    p.strip_width = get_number(j["strip_width"], path + ".strip_width");
    if (p.strip_width <= 0.0) throw ConfigError(path + ".strip_width", "must be positive");
  }
  return p;
}

FrequencySpec parse_frequency(const json& j, const std::string& path) {
  FrequencySpec f;
  if (j.is_string()) {
    f.kind = j.get<std::string>();
    if (f.kind != "golden" && f.kind != "silver") {
      throw ConfigError(path, "expected golden, silver, a number, or an object");
    }
    return f;
  }
  if (j.is_number()) {
    f.kind = "value";
    f.value = get_number(j, path);
  } else if (j.is_object()) {
    reject_unknown(j, path, {"value", "rational", "liouville"});
    if (j.size() != 1) throw ConfigError(path, "expected exactly one of value, rational, liouville");
    if (j.contains("value")) {
      f.kind = "value";
      f.value = get_number(j["value"], path + ".value");
    } else if (j.contains("rational")) {
      const auto& r = j["rational"];
      if (!r.is_array() || r.size() != 2) throw ConfigError(path + ".rational", "expected [p, q]");
      f.kind = "rational";
      f.p = get_integer(r[0], path + ".rational[0]", 1, 1L << 40);
      f.q = get_integer(r[1], path + ".rational[1]", 2, 1L << 40);
      if (f.p >= f.q) throw ConfigError(path + ".rational", "need 0 < p < q");
      if (std::gcd(f.p, f.q) != 1) throw ConfigError(path + ".rational", "p/q must be in lowest terms");
    } else {
      const auto& l = j["liouville"];
      expect_object(l, path + ".liouville");
      reject_unknown(l, path + ".liouville", {"beta", "terms"});
      f.kind = "liouville";
      if (l.contains("beta")) f.beta = get_range(l["beta"], path + ".liouville.beta", 0.05, 10.0);
      if (l.contains("terms")) {
        f.terms = static_cast<std::size_t>(get_integer(l["terms"], path + ".liouville.terms", 2, 12));
      }
    }
  } else {
    throw ConfigError(path, "expected golden, silver, a number, or an object");
  }
  if (f.kind == "value" && !(f.value > 0.0 && f.value < 1.0)) {
    throw ConfigError(path, "frequency value must lie in (0, 1)");
  }
  return f;
}

ObservableSpec parse_observable(const json& j, const std::string& path) {
  expect_object(j, path);
  ObservableSpec o;
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(path + ".kind", "expected geometric or cosine");
  }
  o.kind = j["kind"].get<std::string>();
  if (o.kind == "geometric") {
    reject_unknown(j, path, {"kind", "rate"});
    if (j.contains("rate")) o.rate = get_number(j["rate"], path + ".rate");
  } else if (o.kind == "cosine") {
    reject_unknown(j, path, {"kind", "amplitude"});
    if (j.contains("amplitude")) o.amplitude = get_number(j["amplitude"], path + ".amplitude");
  } else {
    throw ConfigError(path + ".kind", "unknown observable '" + o.kind + "'");
  }
  return o;
}

json complex_list(const std::vector<cplx>& c) {
  json a = json::array();
  for (const auto& x : c) a.push_back({x.real(), x.imag()});
  return a;
}

}  // namespace

TrigPolynomial PotentialSpec::build() const {
  if (family == "amo") return TrigPolynomial::cosine(lambda, strip_width);
  if (family == "extended_harper") return TrigPolynomial::two_cosine(a, b, strip_width);
  if (family == "free") return TrigPolynomial::constant(0.0, strip_width);
  return TrigPolynomial(coefficients, strip_width);
}

json PotentialSpec::to_json() const {
  json j{{"family", family}, {"strip_width", strip_width}};
  if (family == "amo") j["lambda"] = lambda;
  if (family == "extended_harper") {
    j["a"] = a;
    j["b"] = b;
  }
  if (family == "fourier") j["coefficients"] = complex_list(coefficients);
  return j;
}

Frequency FrequencySpec::build() const {
  if (kind == "golden") return Frequency::golden();
  if (kind == "silver") return Frequency::silver();
  if (kind == "rational") return Frequency::rational(p, q);
  if (kind == "liouville") return make_liouville(beta, terms).alpha;
  return Frequency::sample(value);
}

json FrequencySpec::to_json() const {
  if (kind == "golden" || kind == "silver") return kind;
  if (kind == "rational") return json{{"rational", {p, q}}};
  if (kind == "liouville") return json{{"liouville", {{"beta", beta}, {"terms", terms}}}};
  return json{{"value", value}};
}

json ObservableSpec::to_json() const {
  if (kind == "cosine") return json{{"kind", kind}, {"amplitude", amplitude}};
  return json{{"kind", kind}, {"rate", rate}};
}

double RunConfig::phase_offset() const {
  if (seed == 0) return 0.0;
  std::mt19937_64 rng(seed);
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u / static_cast<double>(phases);
}

json RunConfig::resolved() const {
  json j;
  j["command"] = command;
  j["potential"] = potential.to_json();
  j["dual_potential"] = dual_potential.to_json();
  j["frequency"] = frequency.to_json();
  j["n"] = n;
  j["phases"] = phases;
  j["N"] = N;
  j["eps_grid"] = eps_grid;
  j["energies"] = energies;
  j["energy_range"] = energy_range;
  j["energy_count"] = energy_count;
  j["slope_tol"] = slope_tol;
  j["simplicity_floor"] = simplicity_floor;
  j["q_max"] = q_max;
  j["bloch_phases"] = bloch_phases;
  j["deltas"] = deltas;
  j["k_max"] = k_max;
  j["min_gap"] = min_gap;
  j["label_tol"] = label_tol;
  j["psi"] = psi.to_json();
  j["h"] = h;
  j["k_indices"] = k_indices;
  j["seed"] = seed;
  return j;
}

RunConfig parse_config(const json& doc, const std::string& command) {
  expect_object(doc, "$");
  reject_unknown(doc, "$",
                 {"command", "potential", "dual_potential", "frequency", "n", "phases", "N",
                  "eps_grid", "energies", "energy_range", "energy_count", "slope_tol",
                  "simplicity_floor", "q_max", "bloch_phases", "deltas", "k_max", "min_gap",
                  "label_tol", "psi", "h", "k_indices", "seed"});
  RunConfig c;
  c.command = command;
  if (doc.contains("command")) {
    if (!doc["command"].is_string() || doc["command"].get<std::string>() != command) {
      throw ConfigError("$.command", "does not match the requested command '" + command + "'");
    }
  }
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    throw ConfigError("$.command", "unknown command '" + command + "'");
  }
  if (doc.contains("potential")) c.potential = parse_potential(doc["potential"], "$.potential");
  if (doc.contains("dual_potential")) {
    c.dual_potential = parse_potential(doc["dual_potential"], "$.dual_potential");
  }
  if (doc.contains("frequency")) c.frequency = parse_frequency(doc["frequency"], "$.frequency");
  if (doc.contains("n")) c.n = get_integer(doc["n"], "$.n", 1, 100000000);
  if (doc.contains("phases")) c.phases = get_integer(doc["phases"], "$.phases", 1, 4096);
  if (doc.contains("N")) c.N = static_cast<int>(get_integer(doc["N"], "$.N", 2, 20000));
  if (doc.contains("energies")) c.energies = get_number_list(doc["energies"], "$.energies");
  if (doc.contains("energy_range")) {
    c.energy_range = get_number_list(doc["energy_range"], "$.energy_range");
    if (c.energy_range.size() != 2 || !(c.energy_range[0] <= c.energy_range[1])) {
      throw ConfigError("$.energy_range", "expected [lo, hi] with lo <= hi");
    }
  }
  if (doc.contains("energy_count")) {
    c.energy_count = get_integer(doc["energy_count"], "$.energy_count", 1, 100000);
  }
  if (doc.contains("slope_tol")) c.slope_tol = get_range(doc["slope_tol"], "$.slope_tol", 1e-6, 0.5);
  if (doc.contains("simplicity_floor")) {
    c.simplicity_floor = get_range(doc["simplicity_floor"], "$.simplicity_floor", 0.0, 10.0);
  }
  if (doc.contains("q_max")) c.q_max = static_cast<int>(get_integer(doc["q_max"], "$.q_max", 1, 2000));
  if (doc.contains("bloch_phases")) {
    c.bloch_phases = static_cast<int>(get_integer(doc["bloch_phases"], "$.bloch_phases", 1, 1024));
  }
  if (doc.contains("deltas")) {
    c.deltas = get_number_list(doc["deltas"], "$.deltas");
    for (std::size_t i = 0; i < c.deltas.size(); ++i) {
      if (c.deltas[i] < 1e-6 || c.deltas[i] >= 1.0) {
        throw ConfigError("$.deltas[" + std::to_string(i) + "]", "must lie in [1e-6, 1)");
      }
    }
  }
  if (doc.contains("k_max")) c.k_max = static_cast<int>(get_integer(doc["k_max"], "$.k_max", 0, 1000));
  if (doc.contains("min_gap")) c.min_gap = get_range(doc["min_gap"], "$.min_gap", 0.0, 10.0);
  if (doc.contains("label_tol")) c.label_tol = get_range(doc["label_tol"], "$.label_tol", 0.0, 0.5);
  if (doc.contains("psi")) c.psi = parse_observable(doc["psi"], "$.psi");
  if (doc.contains("h")) c.h = get_range(doc["h"], "$.h", 1e-6, 10.0);
  if (c.psi.kind == "geometric" && !(c.psi.rate > c.h)) {
    throw ConfigError("$.psi.rate", "decay rate must exceed h");
  }
  if (doc.contains("k_indices")) {
    const auto& k = doc["k_indices"];
    if (!k.is_array()) throw ConfigError("$.k_indices", "expected an array of integers");
    for (std::size_t i = 0; i < k.size(); ++i) {
      c.k_indices.push_back(get_integer(k[i], "$.k_indices[" + std::to_string(i) + "]", 0, 1000));
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("$.seed", "expected a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("eps_grid")) {
    c.eps_grid = get_number_list(doc["eps_grid"], "$.eps_grid");
    const double h = c.potential.strip_width;
    for (std::size_t i = 0; i < c.eps_grid.size(); ++i) {
      const std::string p = "$.eps_grid[" + std::to_string(i) + "]";
      if (c.eps_grid[i] < 0.0) throw ConfigError(p, "must be nonnegative");
      if (c.eps_grid[i] >= h) {
        throw ConfigError(p, "value " + std::to_string(c.eps_grid[i]) +
                                 " is not below the potential's strip_width " + std::to_string(h));
      }
      if (i > 0 && c.eps_grid[i] <= c.eps_grid[i - 1]) throw ConfigError(p, "grid must be increasing");
    }
    if (c.eps_grid.size() < 8) throw ConfigError("$.eps_grid", "needs at least 8 points");
  }
  try {
    (void)c.potential.build();
    (void)c.dual_potential.build();
  } catch (const std::exception& e) {
    throw ConfigError("$.potential", e.what());
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& command) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc, command);
}

}  // namespace qplab::cli
