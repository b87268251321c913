#ifndef KERRCAT_SCENARIO_HPP
#define KERRCAT_SCENARIO_HPP

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kerrcat/circuit.hpp"
#include "kerrcat/dissipation.hpp"
#include "kerrcat/hamiltonian.hpp"
#include "kerrcat/lifetime.hpp"
#include "kerrcat/units.hpp"

namespace kerrcat {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "degeneracy", "floquet", "ramp",    "lifetime",
                                              "steady",   "wigner",     "surface", "validity"};
  return names;
}

struct KeyDef {
  std::string name;
  std::string fallback;  // empty: no default
  std::string doc;
};

/// Accepted keys per section. Anything else is a configuration error.
inline const std::map<std::string, std::vector<KeyDef>>& schema() {
  static const std::map<std::string, std::vector<KeyDef>> s{
      {"scenario",
       {{"name", "scenario", "output file stem"}, {"command", "", "one of the CLI commands"}}},
      {"circuit",
       {{"topology", "sts", "sts | squid"},
        {"E_J", "80 GHz", "sets E_J1, E_J2 and E_J3 (per junction)"},
        {"E_J1", "", "per-junction energy, overrides E_J"},
        {"E_J2", "", "per-junction energy, overrides E_J"},
        {"E_J3", "", "per-junction energy, overrides E_J"},
        {"E_C", "250 MHz", "charging energy"},
        {"delta_phi", "0", "modulation depth (rad); replaced by the solved value when eps2/K is the target"},
        {"f_d", "12 GHz", "drive frequency omega_d / 2pi, or 'resonant'"},
        {"M", "1", "STS count in series"},
        {"N", "1", "transmon-branch junction count"}}},
      {"hamiltonian",
       {{"source", "circuit", "circuit | ratios"},
        {"kind", "auto", "auto | dkc | rkc | sts | squid"},
        {"K", "1 MHz", "Kerr coefficient when source = ratios"},
        {"eps2_over_K", "0", "two-photon drive target"},
        {"Delta_over_K", "0", "detuning target"},
        {"Lambda_over_K", "0", "cubic term when source = ratios"},
        {"Theta_over_K", "0", "quartic drive when source = ratios"},
        {"detuning_mode", "target", "target | tracking | formula"},
        {"compensate", "false", "add Delta = -2 Lambda eps2 / K"},
        {"delta_ext_over_K", "0", "extra detuning"},
        {"drop_lambda", "false", "set Lambda = 0"},
        {"exact_drive", "false", "sin(dphi cos) drive in the lab frame"}}},
      {"bath",
       {{"set", "o2-rwa", "o2-rwa | o2 | o34 | strong-mod | squid"},
        {"kappa", "8 kHz", "spectral density, flat over frequency"},
        {"kappa_over_K", "", "spectral density in units of K, overrides kappa"},
        {"temperature", "50 mK", "bath temperature"},
        {"n_th", "", "fixed occupation, overrides temperature"},
        {"gamma_phi_over_K", "0", "pure dephasing rate"},
        {"kappa.half", "", ""},
        {"kappa.one", "", ""},
        {"kappa.three_halves", "", ""},
        {"kappa.five_halves", "", ""},
        {"kappa.seven_halves", "", ""},
        {"temperature.half", "", ""},
        {"temperature.one", "", ""},
        {"temperature.three_halves", "", ""},
        {"temperature.five_halves", "", ""},
        {"temperature.seven_halves", "", ""}}},
      {"sweep",
       {{"axis", "eps2_over_K", "eps2_over_K | Delta_over_K | delta_phi | gamma_phi_over_K"},
        {"min", "0", ""},
        {"max", "0", ""},
        {"points", "1", "number of grid points including both ends"}}},
      {"numerics",
       {{"dim", "0", "Fock cutoff; 0 chooses one from the parameters"},
        {"dim_max", "400", ""},
        {"n_pairs", "6", ""},
        {"M0", "4", "initial coherence-block size"},
        {"tolerance", "0.01", "relative M_lv convergence"},
        {"n_levels", "6", "Floquet levels above the ground level"},
        {"ramp_duration_K", "64", ""},
        {"ramp_dt_K", "0.01", ""},
        {"ramp_samples", "101", ""},
        {"floquet_steps", "256", "initial sub-steps per drive period"},
        {"grid_extent", "4", "phase-space half width"},
        {"grid_points", "81", ""},
        {"guard", "128", "largest Fock cutoff for the full Liouvillian"}}},
      {"output", {{"dir", ".", "output directory"}}},
  };
  return s;
}

/// Sectioned key/value text with sorted sections and keys.
struct RawScenario {
  std::map<std::string, std::map<std::string, std::string>> sections;

  std::optional<std::string> get(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }
  bool operator==(const RawScenario&) const = default;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline RawScenario parse_scenario(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config, e.message() + " at line " + std::to_string(e.line()));
  }
  RawScenario raw;
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty()) throw Error(ErrorKind::Config, "key '" + sec + "' outside a section");
    auto& dst = raw.sections[sec];
    for (const auto& [key, val] : body) dst[key] = trim(val.data());
  }
  return raw;
}

inline RawScenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline RawScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open scenario file " + path);
  return parse_scenario(in);
}

inline std::string serialize(const RawScenario& raw) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [sec, body] : raw.sections) {
    if (!first) os << "\n";
    first = false;
    os << "[" << sec << "]\n";
    for (const auto& [k, v] : body) os << k << " = " << v << "\n";
  }
  return os.str();
}

/// Splits "section.key=value" at the first '.' and the first '='.
inline void apply_override(RawScenario& raw, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::Config, "override '" + kv + "' is not of the form section.key=value");
  const std::string lhs = trim(kv.substr(0, eq));
  const auto dot = lhs.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
    throw Error(ErrorKind::Config, "override key '" + lhs + "' needs a section prefix");
  raw.sections[lhs.substr(0, dot)][lhs.substr(dot + 1)] = trim(kv.substr(eq + 1));
}

inline std::vector<std::string> variant_names(const RawScenario& raw) {
  std::vector<std::string> v;
  for (const auto& [sec, _] : raw.sections)
    if (sec.rfind("variant.", 0) == 0) v.push_back(sec.substr(8));
  return v;
}

/// Base sections with one variant's overrides applied; variant sections removed.
inline RawScenario with_variant(const RawScenario& raw, const std::string& variant) {
  RawScenario out;
  for (const auto& [sec, body] : raw.sections)
    if (sec.rfind("variant.", 0) != 0) out.sections[sec] = body;
  if (variant.empty()) return out;
  auto it = raw.sections.find("variant." + variant);
  if (it == raw.sections.end()) throw Error(ErrorKind::Config, "no variant named '" + variant + "'");
  for (const auto& [k, v] : it->second) apply_override(out, k + "=" + v);
  return out;
}

/// Rejects unknown sections and keys, listing the valid ones.
inline void validate_keys(const RawScenario& raw) {
  const auto& sch = schema();
  for (const auto& [sec, body] : raw.sections) {
    if (sec.rfind("variant.", 0) == 0) {
      for (const auto& [k, _] : body) {
        RawScenario probe;
        apply_override(probe, k + "=x");
        validate_keys(probe);
      }
      continue;
    }
    auto s = sch.find(sec);
    if (s == sch.end()) {
      std::string valid;
      for (const auto& [n, _] : sch) valid += " " + n;
      throw Error(ErrorKind::Config, "unknown section [" + sec + "]; valid sections:" + valid);
    }
    for (const auto& [k, _] : body) {
      const bool ok = std::any_of(s->second.begin(), s->second.end(), [&](const KeyDef& d) { return d.name == k; });
      if (!ok) {
        std::string valid;
        for (const auto& d : s->second) valid += " " + d.name;
        throw Error(ErrorKind::Config, "unknown key '" + k + "' in [" + sec + "]; valid keys:" + valid);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Value parsing

namespace detail {
inline std::pair<double, std::string> split_number(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, what + ": cannot parse number from '" + text + "'");
  }
  if (!std::isfinite(v)) throw Error(ErrorKind::Config, what + ": value must be finite");
  return {v, trim(s.substr(pos))};
}
}  // namespace detail

inline double parse_double(const std::string& text, const std::string& what) {
  auto [v, unit] = detail::split_number(text, what);
  if (!unit.empty()) throw Error(ErrorKind::Config, what + ": unexpected suffix '" + unit + "'");
  return v;
}

inline int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(ErrorKind::Config, what + ": expected an integer");
  return static_cast<int>(v);
}

inline bool parse_bool(const std::string& text, const std::string& what) {
  std::string s = trim(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorKind::Config, what + ": expected true or false");
}

/// Frequency-like energy E/h in MHz. A bare number is read as MHz.
inline double parse_mhz(const std::string& text, const std::string& what) {
  auto [v, unit] = detail::split_number(text, what);
  if (unit.empty() || unit == "MHz") return v;
  if (unit == "GHz") return v * 1e3;
  if (unit == "kHz") return v * 1e-3;
  if (unit == "Hz") return v * 1e-6;
  throw Error(ErrorKind::Config, what + ": unknown unit '" + unit + "' (Hz, kHz, MHz, GHz)");
}

/// Lindblad rate in 1/us. "8 kHz" means 8e3 per second; no factor of 2pi.
inline double parse_rate(const std::string& text, const std::string& what) {
  auto [v, unit] = detail::split_number(text, what);
  if (unit == "Hz") return v * 1e-6;
  if (unit == "kHz") return v * 1e-3;
  if (unit == "MHz") return v;
  if (unit == "/us" || unit == "1/us") return v;
  throw Error(ErrorKind::Config, what + ": rate needs a unit (Hz, kHz, MHz, /us)");
}

inline double parse_kelvin(const std::string& text, const std::string& what) {
  auto [v, unit] = detail::split_number(text, what);
  if (unit == "mK") return v * 1e-3;
  if (unit == "K") return v;
  throw Error(ErrorKind::Config, what + ": temperature needs a unit (mK, K)");
}

// ---------------------------------------------------------------------------
// Resolved scenario

struct SweepSpec {
  std::string axis = "eps2_over_K";
  double min = 0.0, max = 0.0;
  int points = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) v.push_back(points == 1 ? min : min + (max - min) * i / (points - 1));
    return v;
  }
};

struct NumericsSpec {
  int dim = 0, dim_max = 400, n_pairs = 6, M0 = 4, n_levels = 6, ramp_samples = 101, floquet_steps = 256,
      grid_points = 81, guard = kSuperoperatorGuard;
  double tolerance = 0.01, ramp_duration_K = 64.0, ramp_dt_K = 0.01, grid_extent = 4.0;
};

struct BathInputs {
  DissipatorSet set = DissipatorSet::O2Rwa;
  double kappa = 8e-3;  // 1/us
  std::optional<double> kappa_over_K;
  double temperature = 0.05;
  std::optional<double> n_th;
  double gamma_phi_over_K = 0.0;
  std::map<FreqLabel, double> kappa_label, temperature_label;

  /// Bath at a given K and drive frequency.
  BathSpec make(double K, double omega_d) const {
    BathSpec b;
    b.omega_d = omega_d;
    const double k0 = kappa_over_K ? *kappa_over_K * K : kappa;
    for (auto l : kAllLabels) {
      b.kappa[l] = kappa_label.count(l) ? kappa_label.at(l) : k0;
      b.temperature[l] = temperature_label.count(l) ? temperature_label.at(l) : temperature;
      if (n_th) b.n_th[l] = *n_th;
    }
    return b;
  }
};

struct HamiltonianInputs {
  bool from_circuit = true;
  std::string kind = "auto";
  double K_mhz = 1.0;
  double eps2_over_K = 0.0, Delta_over_K = 0.0, Lambda_over_K = 0.0, Theta_over_K = 0.0;
  DetuningSpec detuning;  // delta_ext stored in units of K here
  bool drop_lambda = false;
  bool exact_drive = false;
};

struct Scenario {
  std::string name = "scenario";
  std::string command;
  CircuitParams circuit;
  bool resonant_drive = false;
  HamiltonianInputs ham;
  BathInputs bath;
  SweepSpec sweep;
  NumericsSpec numerics;
  std::string out_dir = ".";
  RawScenario raw;  // the merged, validated input
};

namespace detail {
inline std::string value_or_default(const RawScenario& raw, const std::string& sec, const std::string& key) {
  if (auto v = raw.get(sec, key)) return *v;
  for (const auto& d : schema().at(sec))
    if (d.name == key) return d.fallback;
  return "";
}

inline FreqLabel label_from_suffix(const std::string& s) {
  if (s == "half") return FreqLabel::Half;
  if (s == "one") return FreqLabel::One;
  if (s == "three_halves") return FreqLabel::ThreeHalves;
  if (s == "five_halves") return FreqLabel::FiveHalves;
  return FreqLabel::SevenHalves;
}
}  // namespace detail

/// Typed view of a scenario (variant already applied). Throws Config errors.
inline Scenario resolve(const RawScenario& raw) {
  validate_keys(raw);
  auto val = [&](const std::string& sec, const std::string& key) { return detail::value_or_default(raw, sec, key); };
  auto what = [](const std::string& sec, const std::string& key) { return sec + "." + key; };
  Scenario s;
  s.raw = raw;
  s.name = val("scenario", "name");
  s.command = val("scenario", "command");

  CircuitParams& c = s.circuit;
  const std::string topo = val("circuit", "topology");
  if (topo == "sts")
    c.topology = Topology::STS;
  else if (topo == "squid")
    c.topology = Topology::SQUID;
  else
    throw Error(ErrorKind::Config, "circuit.topology must be sts or squid");
  const double EJ = parse_mhz(val("circuit", "E_J"), "circuit.E_J");
  c.E_J1 = c.E_J2 = c.E_J3 = EJ;
  if (auto v = raw.get("circuit", "E_J1")) c.E_J1 = parse_mhz(*v, "circuit.E_J1");
  if (auto v = raw.get("circuit", "E_J2")) c.E_J2 = parse_mhz(*v, "circuit.E_J2");
  if (auto v = raw.get("circuit", "E_J3")) c.E_J3 = parse_mhz(*v, "circuit.E_J3");
  c.E_C = parse_mhz(val("circuit", "E_C"), "circuit.E_C");
  c.delta_phi = parse_double(val("circuit", "delta_phi"), "circuit.delta_phi");
  c.M = parse_int(val("circuit", "M"), "circuit.M");
  c.N = parse_int(val("circuit", "N"), "circuit.N");
  const std::string fd = val("circuit", "f_d");
  if (fd == "resonant") {
    s.resonant_drive = true;
    c.omega_d = 1.0;  // replaced below once the circuit validates
  } else {
    c.omega_d = units::from_mhz(parse_mhz(fd, "circuit.f_d"));
  }
  if (!(c.E_J1 > 0 && c.E_J2 > 0 && c.E_J3 > 0 && c.E_C > 0))
    throw Error(ErrorKind::Config, "circuit energies must be positive");
  if (c.M < 1 || c.N < c.M || c.N % c.M != 0)
    throw Error(ErrorKind::Config, "circuit.N must be a positive multiple of circuit.M");
  if (!(c.omega_d > 0)) throw Error(ErrorKind::Config, "circuit.f_d must be positive");
  if (s.resonant_drive) {
    try {
      c.omega_d = resonant_omega_d(c);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, std::string("circuit: ") + e.what());
    }
  }

  HamiltonianInputs& h = s.ham;
  const std::string src = val("hamiltonian", "source");
  if (src != "circuit" && src != "ratios") throw Error(ErrorKind::Config, "hamiltonian.source must be circuit or ratios");
  h.from_circuit = src == "circuit";
  h.kind = val("hamiltonian", "kind");
  if (h.kind != "auto" && h.kind != "dkc" && h.kind != "rkc" && h.kind != "sts" && h.kind != "squid")
    throw Error(ErrorKind::Config, "hamiltonian.kind must be auto, dkc, rkc, sts or squid");
  h.K_mhz = parse_mhz(val("hamiltonian", "K"), what("hamiltonian", "K"));
  if (!(h.K_mhz > 0)) throw Error(ErrorKind::Config, "hamiltonian.K must be positive");
  h.eps2_over_K = parse_double(val("hamiltonian", "eps2_over_K"), "hamiltonian.eps2_over_K");
  h.Delta_over_K = parse_double(val("hamiltonian", "Delta_over_K"), "hamiltonian.Delta_over_K");
  h.Lambda_over_K = parse_double(val("hamiltonian", "Lambda_over_K"), "hamiltonian.Lambda_over_K");
  h.Theta_over_K = parse_double(val("hamiltonian", "Theta_over_K"), "hamiltonian.Theta_over_K");
  const std::string mode = val("hamiltonian", "detuning_mode");
  if (mode == "target")
    h.detuning.mode = DetuningMode::Target;
  else if (mode == "tracking")
    h.detuning.mode = DetuningMode::Tracking;
  else if (mode == "formula")
    h.detuning.mode = DetuningMode::Formula;
  else
    throw Error(ErrorKind::Config, "hamiltonian.detuning_mode must be target, tracking or formula");
  h.detuning.target_over_K = h.Delta_over_K;
  h.detuning.compensate = parse_bool(val("hamiltonian", "compensate"), "hamiltonian.compensate");
  h.detuning.delta_ext = parse_double(val("hamiltonian", "delta_ext_over_K"), "hamiltonian.delta_ext_over_K");
  h.drop_lambda = parse_bool(val("hamiltonian", "drop_lambda"), "hamiltonian.drop_lambda");
  h.exact_drive = parse_bool(val("hamiltonian", "exact_drive"), "hamiltonian.exact_drive");
  if (h.eps2_over_K < 0) throw Error(ErrorKind::Config, "hamiltonian.eps2_over_K must be >= 0");

  BathInputs& b = s.bath;
  const auto set = dissipator_set_from_string(val("bath", "set"));
  if (!set) throw Error(ErrorKind::Config, "bath.set must be o2-rwa, o2, o34, strong-mod or squid");
  b.set = *set;
  b.kappa = parse_rate(val("bath", "kappa"), "bath.kappa");
  if (auto v = raw.get("bath", "kappa_over_K")) b.kappa_over_K = parse_double(*v, "bath.kappa_over_K");
  b.temperature = parse_kelvin(val("bath", "temperature"), "bath.temperature");
  if (auto v = raw.get("bath", "n_th")) b.n_th = parse_double(*v, "bath.n_th");
  b.gamma_phi_over_K = parse_double(val("bath", "gamma_phi_over_K"), "bath.gamma_phi_over_K");
  if (auto it = raw.sections.find("bath"); it != raw.sections.end()) {
    for (const auto& [k, v] : it->second) {
      if (k.rfind("kappa.", 0) == 0) b.kappa_label[detail::label_from_suffix(k.substr(6))] = parse_rate(v, "bath." + k);
      if (k.rfind("temperature.", 0) == 0)
        b.temperature_label[detail::label_from_suffix(k.substr(12))] = parse_kelvin(v, "bath." + k);
    }
  }
  if (b.kappa < 0 || (b.kappa_over_K && *b.kappa_over_K < 0)) throw Error(ErrorKind::Config, "bath kappa must be >= 0");
  if (!(b.temperature > 0)) throw Error(ErrorKind::Config, "bath.temperature must be positive");
  if (b.n_th && *b.n_th < 0) throw Error(ErrorKind::Config, "bath.n_th must be >= 0");
  if (b.gamma_phi_over_K < 0) throw Error(ErrorKind::Config, "bath.gamma_phi_over_K must be >= 0");
  if (c.topology == Topology::SQUID && b.set != DissipatorSet::Squid && h.from_circuit &&
      (s.command == "lifetime"))
    throw Error(ErrorKind::Config, "a SQUID circuit needs bath.set = squid");

  SweepSpec& sw = s.sweep;
  sw.axis = val("sweep", "axis");
  const std::vector<std::string> axes{"eps2_over_K", "Delta_over_K", "delta_phi", "gamma_phi_over_K"};
  if (std::find(axes.begin(), axes.end(), sw.axis) == axes.end())
    throw Error(ErrorKind::Config, "sweep.axis must be eps2_over_K, Delta_over_K, delta_phi or gamma_phi_over_K");
  sw.min = parse_double(val("sweep", "min"), "sweep.min");
  sw.max = parse_double(val("sweep", "max"), "sweep.max");
  sw.points = parse_int(val("sweep", "points"), "sweep.points");
  if (sw.min > sw.max) throw Error(ErrorKind::Config, "sweep.min must not exceed sweep.max");
  if (sw.points < 1) throw Error(ErrorKind::Config, "sweep.points must be >= 1");
  if (sw.points > 1 && sw.min == sw.max) throw Error(ErrorKind::Config, "sweep range is empty");

  NumericsSpec& n = s.numerics;
  n.dim = parse_int(val("numerics", "dim"), "numerics.dim");
  n.dim_max = parse_int(val("numerics", "dim_max"), "numerics.dim_max");
  n.n_pairs = parse_int(val("numerics", "n_pairs"), "numerics.n_pairs");
  n.M0 = parse_int(val("numerics", "M0"), "numerics.M0");
  n.tolerance = parse_double(val("numerics", "tolerance"), "numerics.tolerance");
  n.n_levels = parse_int(val("numerics", "n_levels"), "numerics.n_levels");
  n.ramp_duration_K = parse_double(val("numerics", "ramp_duration_K"), "numerics.ramp_duration_K");
  n.ramp_dt_K = parse_double(val("numerics", "ramp_dt_K"), "numerics.ramp_dt_K");
  n.ramp_samples = parse_int(val("numerics", "ramp_samples"), "numerics.ramp_samples");
  n.floquet_steps = parse_int(val("numerics", "floquet_steps"), "numerics.floquet_steps");
  n.grid_extent = parse_double(val("numerics", "grid_extent"), "numerics.grid_extent");
  n.grid_points = parse_int(val("numerics", "grid_points"), "numerics.grid_points");
  n.guard = parse_int(val("numerics", "guard"), "numerics.guard");
  if (n.dim != 0 && n.dim < 2) throw Error(ErrorKind::Config, "numerics.dim must be 0 or >= 2");
  if (n.dim_max < 2 || n.n_pairs < 1 || n.M0 < 1 || n.n_levels < 1 || n.ramp_samples < 2 || n.floquet_steps < 1 ||
      n.grid_points < 2 || n.guard < 2)
    throw Error(ErrorKind::Config, "numerics values out of range");
  if (!(n.tolerance > 0) || !(n.ramp_duration_K >= 0) || !(n.ramp_dt_K > 0) || !(n.grid_extent > 0))
    throw Error(ErrorKind::Config, "numerics values out of range");

  s.out_dir = val("output", "dir");
  return s;
}

}  // namespace kerrcat

#endif  // KERRCAT_SCENARIO_HPP
