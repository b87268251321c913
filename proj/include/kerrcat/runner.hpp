#ifndef KERRCAT_RUNNER_HPP
#define KERRCAT_RUNNER_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "kerrcat/lifetime.hpp"
#include "kerrcat/liouvillian.hpp"
#include "kerrcat/parallel.hpp"
#include "kerrcat/scenario.hpp"
#include "kerrcat/spectra.hpp"

namespace kerrcat {

inline constexpr const char* kVersion = "0.1.0";

/// Numeric result table; every cell is a double so rows never need quoting.
struct Table {
  std::string suffix;  // appended to the file stem, may be empty
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct RunOutput {
  std::vector<Table> tables;
  std::size_t points = 0;
  std::size_t failures = 0;
  nlohmann::json failed = nlohmann::json::array();
  nlohmann::json derived = nlohmann::json::object();
};

/// Fixed 12-significant-digit formatting.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += "\n";
  }
  return out;
}

/// Writes through a temporary file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Resource, "cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw Error(ErrorKind::Resource, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Parameter resolution shared by the commands

/// Sections a command needs to be written out explicitly.
inline std::vector<std::string> required_sections(const Scenario& s) {
  std::vector<std::string> req{"scenario"};
  const std::string& c = s.command;
  if (c == "spectrum" || c == "degeneracy" || c == "floquet" || c == "lifetime" || c == "steady") req.push_back("sweep");
  if (c == "lifetime" || c == "steady" || c == "wigner") req.push_back("bath");
  if (s.ham.from_circuit || c == "floquet" || c == "ramp" || c == "lifetime" || c == "validity")
    req.push_back("circuit");
  return req;
}

/// Command-level checks that need the whole scenario.
inline void check_scenario(const Scenario& s) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), s.command) == names.end())
    throw Error(ErrorKind::Config, "scenario.command '" + s.command + "' is not a known command");
  for (const auto& sec : required_sections(s))
    if (!s.raw.sections.count(sec)) throw Error(ErrorKind::Config, "command " + s.command + " needs a [" + sec + "] section");
  const std::string& c = s.command;
  const bool circuit_only = c == "floquet" || c == "ramp" || c == "lifetime" || c == "validity";
  if (circuit_only && !s.ham.from_circuit)
    throw Error(ErrorKind::Config, "command " + c + " needs hamiltonian.source = circuit");
  if (c == "floquet" && s.circuit.topology != Topology::STS)
    throw Error(ErrorKind::Config, "floquet needs an STS circuit");
  if ((c == "spectrum" || c == "degeneracy" || c == "steady") && s.sweep.axis != "eps2_over_K" &&
      s.sweep.axis != "Delta_over_K")
    throw Error(ErrorKind::Config, "command " + c + " sweeps eps2_over_K or Delta_over_K");
  if (c == "floquet" && s.sweep.axis != "eps2_over_K") throw Error(ErrorKind::Config, "floquet sweeps eps2_over_K");
  if (c == "lifetime" && s.sweep.min < 0 && s.sweep.axis != "Delta_over_K")
    throw Error(ErrorKind::Config, "sweep.min must be >= 0 for this axis");
  if ((c == "spectrum" || c == "degeneracy" || c == "steady" || c == "floquet") && s.sweep.axis == "eps2_over_K" &&
      s.sweep.min < 0)
    throw Error(ErrorKind::Config, "sweep.min must be >= 0 for eps2_over_K");
  if (c == "lifetime") {
    const bool squid = s.circuit.topology == Topology::SQUID;
    if (squid != (s.bath.set == DissipatorSet::Squid))
      throw Error(ErrorKind::Config, "bath.set = squid goes with circuit.topology = squid and only with it");
  }
}

inline HamiltonianKind hamiltonian_kind(const Scenario& s, const EffectiveParams& p) {
  const std::string& k = s.ham.kind;
  if (k == "dkc") return HamiltonianKind::DKC;
  if (k == "rkc") return HamiltonianKind::RKC;
  if (k == "sts") return HamiltonianKind::STS_EFFECTIVE;
  if (k == "squid") return HamiltonianKind::SQUID_EFFECTIVE;
  if (s.ham.from_circuit)
    return s.circuit.topology == Topology::SQUID ? HamiltonianKind::SQUID_EFFECTIVE : HamiltonianKind::STS_EFFECTIVE;
  return p.Theta != 0.0 ? HamiltonianKind::SQUID_EFFECTIVE : HamiltonianKind::STS_EFFECTIVE;
}

/// K of the configured system (rad/us); independent of the drive strength.
inline double base_K(const Scenario& s) {
  if (!s.ham.from_circuit) return units::from_mhz(s.ham.K_mhz);
  CircuitParams c = s.circuit;
  c.delta_phi = 0.0;
  return effective_params(c).K;
}

inline DetuningSpec detuning_spec(const Scenario& s, double Delta_over_K) {
  DetuningSpec d = s.ham.detuning;
  d.target_over_K = Delta_over_K;
  d.delta_ext = s.ham.detuning.delta_ext * base_K(s);
  return d;
}

/// Effective parameters at one (eps2/K, Delta/K) point.
inline EffectiveParams point_params(const Scenario& s, double eps2_over_K, double Delta_over_K) {
  EffectiveParams p;
  if (!s.ham.from_circuit) {
    p = EffectiveParams::kerr_units(units::from_mhz(s.ham.K_mhz), eps2_over_K, 0.0, s.ham.Lambda_over_K);
    p.Theta = s.ham.Theta_over_K * p.K;
    p.omega_d = s.circuit.omega_d;
    if (s.ham.drop_lambda) p.Lambda = 0.0;
    DetuningSpec d = detuning_spec(s, Delta_over_K);
    if (d.mode == DetuningMode::Formula) d.mode = DetuningMode::Target;
    apply_detuning(p, d);
    return p;
  }
  CircuitParams c = s.circuit;
  c.delta_phi = delta_phi_for_eps2(c, eps2_over_K);
  p = s.bath.set == DissipatorSet::StrongMod ? strong_modulation_params(c) : effective_params(c);
  if (s.ham.drop_lambda) p.Lambda = 0.0;
  apply_detuning(p, detuning_spec(s, Delta_over_K));
  return p;
}

inline FockSpace choose_space(const Scenario& s, const EffectiveParams& p) {
  return FockSpace{s.numerics.dim > 0 ? s.numerics.dim : initial_dim(p)};
}

inline Operator point_hamiltonian(const Scenario& s, const EffectiveParams& p, FockSpace space) {
  HamiltonianSpec spec;
  spec.kind = hamiltonian_kind(s, p);
  spec.params = p;
  spec.space = space;
  return build_static(spec);
}

inline MasterEquation point_master_equation(const Scenario& s, const EffectiveParams& p, FockSpace space) {
  const BathSpec bath = s.bath.make(p.K, p.omega_d > 0 ? p.omega_d : s.circuit.omega_d);
  DissipatorList terms = build_dissipators(s.bath.set, p, bath, space);
  if (s.bath.gamma_phi_over_K > 0) terms.push_back(dephasing_term(s.bath.gamma_phi_over_K * p.K, space));
  return MasterEquation(point_hamiltonian(s, p, space), std::move(terms));
}

/// The (eps2/K, Delta/K) pair for a sweep value.
inline std::pair<double, double> sweep_point(const Scenario& s, double v) {
  if (s.sweep.axis == "eps2_over_K") return {v, s.ham.Delta_over_K};
  return {s.ham.eps2_over_K, v};
}

inline nlohmann::json derived_params(const Scenario& s) {
  nlohmann::json j;
  const double K = base_K(s);
  j["K_over_h_MHz"] = units::to_mhz(K);
  j["omega_d_over_2pi_GHz"] = units::to_mhz(s.circuit.omega_d) * 1e-3;
  try {
    const auto p = point_params(s, s.ham.eps2_over_K, s.ham.Delta_over_K);
    j["eps2_over_K"] = p.eps2 / p.K;
    j["Delta_over_K"] = p.Delta / p.K;
    j["Lambda_over_K"] = p.Lambda / p.K;
    j["Theta_over_K"] = p.Theta / p.K;
    j["delta_phi"] = p.delta_phi;
    if (s.ham.from_circuit) {
      const BathSpec b = s.bath.make(p.K, p.omega_d);
      j["n_th_half"] = b.occupation(FreqLabel::Half);
      j["kappa_half_per_us"] = b.kappa_at(FreqLabel::Half);
    }
  } catch (const std::exception& e) {
    j["base_point_error"] = e.what();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {
inline void record_failure(RunOutput& out, double axis, const std::string& err) {
  ++out.failures;
  out.failed.push_back({{"axis", axis}, {"error", err}});
}
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace detail

inline RunOutput run_spectrum(const Scenario& s, int jobs) {
  RunOutput out;
  const auto vals = s.sweep.values();
  const int np = s.numerics.n_pairs;
  std::vector<std::vector<std::vector<double>>> rows(vals.size());
  std::vector<std::string> errs(vals.size());
  parallel_for(vals.size(), jobs, [&](std::size_t i) {
    try {
      const auto [e, D] = sweep_point(s, vals[i]);
      const auto p = point_params(s, e, D);
      const auto ps = paired_spectrum(point_hamiltonian(s, p, choose_space(s, p)), np);
      for (int m = 0; m < np; ++m) {
        const auto& l = ps.levels[static_cast<size_t>(m)];
        rows[i].push_back({vals[i], double(m), l.E_plus / p.K, l.E_minus / p.K, l.delta / p.K});
      }
    } catch (const std::exception& ex) {
      errs[i] = ex.what();
    }
  });
  Table t{"", {s.sweep.axis, "pair", "E_plus_over_K", "E_minus_over_K", "delta_over_K"}, {}};
  for (size_t i = 0; i < vals.size(); ++i) {
    if (!errs[i].empty()) {
      detail::record_failure(out, vals[i], errs[i]);
      for (int m = 0; m < np; ++m) t.rows.push_back({vals[i], double(m), detail::kNaN, detail::kNaN, detail::kNaN});
    }
    for (auto& r : rows[i]) t.rows.push_back(r);
  }
  out.points = vals.size();
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_degeneracy(const Scenario& s, int) {
  RunOutput out;
  const auto vals = s.sweep.values();
  const bool along_eps2 = s.sweep.axis == "eps2_over_K";
  const auto p = point_params(s, along_eps2 ? vals.front() : s.ham.eps2_over_K,
                              along_eps2 ? s.ham.Delta_over_K : vals.front());
  DegeneracyOptions opt;
  opt.n_pairs = s.numerics.n_pairs;
  opt.kind = hamiltonian_kind(s, p);
  FockSpace space = s.numerics.dim > 0 ? FockSpace{s.numerics.dim} : FockSpace{40};
  const auto scan = degeneracy_scan(p, along_eps2 ? ScanAxis::Eps2 : ScanAxis::Delta, vals, space, opt);
  Table levels{"_levels", {s.sweep.axis, "pair", "delta_over_K"}, {}};
  for (size_t i = 0; i < scan.axis.size(); ++i)
    for (size_t m = 0; m < scan.deltas[i].size(); ++m) levels.rows.push_back({scan.axis[i], double(m), scan.deltas[i][m]});
  Table cross{"_crossings", {s.sweep.axis, "pair", "cluster", "cluster_center", "cluster_size"}, {}};
  for (size_t k = 0; k < scan.clusters.size(); ++k) {
    const auto& cl = scan.clusters[k];
    for (int m : cl.members) {
      double at = cl.center;
      for (const auto& c : scan.crossings)
        if (c.m == m && std::abs(c.value - cl.center) <= opt.cluster_width * 2) at = c.value;
      cross.rows.push_back({at, double(m), double(k), cl.center, double(cl.members.size())});
    }
  }
  out.points = vals.size();
  out.derived["tracking_warnings"] = scan.tracking_warnings;
  out.tables.push_back(std::move(levels));
  out.tables.push_back(std::move(cross));
  return out;
}

inline RunOutput run_floquet(const Scenario& s, int jobs) {
  RunOutput out;
  const auto vals = s.sweep.values();
  const int nl = s.numerics.n_levels;
  const double K = base_K(s);
  FloquetOptions fo;
  fo.n_steps_initial = s.numerics.floquet_steps;
  std::vector<std::vector<std::vector<double>>> rows(vals.size());
  std::vector<std::string> errs(vals.size());
  parallel_for(vals.size(), jobs, [&](std::size_t i) {
    try {
      CircuitParams c = s.circuit;
      c.delta_phi = delta_phi_for_eps2(c, vals[i]);
      const FockSpace space{s.numerics.dim > 0 ? s.numerics.dim : 60};
      const auto r = floquet_quasienergies(c, space, nl, fo, s.ham.exact_drive);
      for (int n = 1; n <= nl; ++n) {
        const auto& l = r.levels[static_cast<size_t>(n)];
        rows[i].push_back(
            {vals[i], double(n), l.quasi_gap / K, l.effective_gap / K, std::abs(l.quasi_gap - l.effective_gap) / K});
      }
    } catch (const std::exception& ex) {
      errs[i] = ex.what();
    }
  });
  Table t{"", {"eps2_over_K", "level", "quasi_over_K", "effective_over_K", "abs_error_over_K"}, {}};
  for (size_t i = 0; i < vals.size(); ++i) {
    if (!errs[i].empty()) {
      detail::record_failure(out, vals[i], errs[i]);
      for (int n = 1; n <= nl; ++n) t.rows.push_back({vals[i], double(n), detail::kNaN, detail::kNaN, detail::kNaN});
    }
    for (auto& r : rows[i]) t.rows.push_back(r);
  }
  out.points = vals.size();
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_ramp(const Scenario& s, int) {
  RunOutput out;
  RampSchedule sch;
  sch.eps2_final_over_K = s.ham.eps2_over_K;
  sch.duration_K = s.numerics.ramp_duration_K;
  sch.dt_K = s.numerics.ramp_dt_K;
  sch.samples = s.numerics.ramp_samples;
  sch.detuning = detuning_spec(s, s.ham.Delta_over_K);
  const FockSpace space{s.numerics.dim > 0 ? s.numerics.dim : 40};
  const auto r = adiabatic_ramp(s.circuit, sch, space);
  Table t{"", {"t_us", "eps2_over_K", "overlap", "n_mean"}, {}};
  for (size_t k = 0; k < r.times.size(); ++k) t.rows.push_back({r.times[k], r.eps2_over_K[k], r.overlap[k], r.n_mean[k]});
  out.points = 1;
  out.derived["final_overlap"] = r.overlap.empty() ? detail::kNaN : r.overlap.back();
  out.derived["final_n_mean"] = r.n_mean.empty() ? detail::kNaN : r.n_mean.back();
  out.tables.push_back(std::move(t));
  return out;
}

inline LifetimeConfig lifetime_config(const Scenario& s) {
  LifetimeConfig cfg;
  const double K = base_K(s);
  cfg.set = s.bath.set;
  cfg.bath = s.bath.make(K, s.circuit.omega_d);
  cfg.detuning = detuning_spec(s, s.ham.Delta_over_K);
  cfg.gamma_phi_over_K = s.bath.gamma_phi_over_K;
  cfg.drop_lambda = s.ham.drop_lambda;
  cfg.dim0 = s.numerics.dim;
  cfg.adaptive.M0 = s.numerics.M0;
  cfg.adaptive.tolerance = s.numerics.tolerance;
  cfg.adaptive.dim_max = s.numerics.dim_max;
  return cfg;
}

inline SweepAxis sweep_axis(const std::string& name) {
  if (name == "Delta_over_K") return SweepAxis::DetuningRatio;
  if (name == "delta_phi") return SweepAxis::ModulationDepth;
  if (name == "gamma_phi_over_K") return SweepAxis::GammaPhi;
  return SweepAxis::Eps2Ratio;
}

inline RunOutput run_lifetime(const Scenario& s, int jobs) {
  RunOutput out;
  const auto vals = s.sweep.values();
  SweepOptions so;
  so.eps2_over_K = s.ham.eps2_over_K;
  so.jobs = jobs;
  const auto sr = sweep(sweep_axis(s.sweep.axis), vals, s.circuit, lifetime_config(s), so);
  Table t{"", {s.sweep.axis, "T_alpha_us", "lambda_re", "M_lv", "dim"}, {}};
  for (const auto& p : sr.points) {
    t.rows.push_back({p.axis, p.T, p.lambda_re, double(p.M_lv), double(p.dim)});
    if (!p.ok) detail::record_failure(out, p.axis, p.error);
  }
  out.points = vals.size();
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_steady(const Scenario& s, int jobs) {
  RunOutput out;
  const auto vals = s.sweep.values();
  std::vector<std::vector<double>> rows(vals.size());
  std::vector<std::string> errs(vals.size());
  parallel_for(vals.size(), jobs, [&](std::size_t i) {
    try {
      const auto [e, D] = sweep_point(s, vals[i]);
      const auto p = point_params(s, e, D);
      const auto sa = steady_state(point_master_equation(s, p, choose_space(s, p)), s.numerics.guard);
      auto P = [&](size_t k) { return k < sa.P.size() ? sa.P[k] : 0.0; };
      rows[i] = {vals[i], P(0), P(1), P(2), P(3), sa.P_leak};
    } catch (const std::exception& ex) {
      errs[i] = ex.what();
    }
  });
  Table t{"", {s.sweep.axis, "P1", "P2", "P3", "P4", "P_leak"}, {}};
  for (size_t i = 0; i < vals.size(); ++i) {
    if (!errs[i].empty()) {
      detail::record_failure(out, vals[i], errs[i]);
      rows[i] = {vals[i], detail::kNaN, detail::kNaN, detail::kNaN, detail::kNaN, detail::kNaN};
    }
    t.rows.push_back(rows[i]);
  }
  out.points = vals.size();
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_wigner(const Scenario& s, int) {
  RunOutput out;
  const auto p = point_params(s, s.ham.eps2_over_K, s.ham.Delta_over_K);
  const auto sa = steady_state(point_master_equation(s, p, choose_space(s, p)), s.numerics.guard);
  const auto grid = PhaseGrid::square(s.numerics.grid_extent, s.numerics.grid_points);
  const auto w = wigner(sa.rho_ss, grid);
  Table t{"", {"x", "p", "W"}, {}};
  for (size_t i = 0; i < grid.p.size(); ++i)
    for (size_t j = 0; j < grid.x.size(); ++j)
      t.rows.push_back({grid.x[j], grid.p[i], w.W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  out.points = 1;
  out.derived["wigner_integral"] = w.integral;
  out.derived["support_warning"] = w.support_warning;
  out.derived["P_leak"] = sa.P_leak;
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_surface(const Scenario& s, int) {
  RunOutput out;
  const auto p = point_params(s, s.ham.eps2_over_K, s.ham.Delta_over_K);
  const auto xs = linspace(-s.numerics.grid_extent, s.numerics.grid_extent, s.numerics.grid_points);
  const auto cs = classical_surface(p, xs, xs);
  Table t{"", {"x", "p", "E_over_K"}, {}};
  for (size_t i = 0; i < cs.p.size(); ++i)
    for (size_t j = 0; j < cs.x.size(); ++j)
      t.rows.push_back({cs.x[j], cs.p[i], cs.E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / p.K});
  // kind: 0 well (local maximum), 1 saddle, 2 minimum
  Table ex{"_extrema", {"kind", "x", "p", "E_over_K"}, {}};
  for (const auto& e : cs.extrema) ex.rows.push_back({double(static_cast<int>(e.kind)), e.x, e.p, e.E / p.K});
  out.points = 1;
  out.tables.push_back(std::move(t));
  out.tables.push_back(std::move(ex));
  return out;
}

inline RunOutput run_validity(const Scenario& s, int) {
  RunOutput out;
  CircuitParams c = s.circuit;
  c.delta_phi = delta_phi_for_eps2(c, s.ham.eps2_over_K);
  const auto r = validity_report(c, s.ham.eps2_over_K);
  Table t{"",
          {"eps2_over_K", "delta_phi", "phi_zps", "sixth_order_ratio", "squeeze_second", "squeeze_fourth", "ok"},
          {{s.ham.eps2_over_K, r.delta_phi, r.phi_zps, r.sixth_order_ratio, r.squeeze_second, r.squeeze_fourth,
            (r.sixth_order_ok && r.squeeze_second_ok && r.squeeze_fourth_ok) ? 1.0 : 0.0}}};
  out.points = 1;
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_command(const Scenario& s, int jobs) {
  const std::string& c = s.command;
  if (c == "spectrum") return run_spectrum(s, jobs);
  if (c == "degeneracy") return run_degeneracy(s, jobs);
  if (c == "floquet") return run_floquet(s, jobs);
  if (c == "ramp") return run_ramp(s, jobs);
  if (c == "lifetime") return run_lifetime(s, jobs);
  if (c == "steady") return run_steady(s, jobs);
  if (c == "wigner") return run_wigner(s, jobs);
  if (c == "surface") return run_surface(s, jobs);
  if (c == "validity") return run_validity(s, jobs);
  throw Error(ErrorKind::Config, "unknown command " + c);
}

// ---------------------------------------------------------------------------
// Scenario files to artifacts

struct Job {
  std::string stem;     // name or name_variant
  std::string variant;  // empty for the base scenario
  Scenario scenario;
};

/// Expands variants and validates every one before anything runs.
inline std::vector<Job> plan_jobs(const RawScenario& raw, const std::string& command,
                                  const std::vector<std::string>& overrides) {
  RawScenario base = raw;
  if (!command.empty()) {
    const auto given = base.get("scenario", "command");
    if (given && *given != command)
      throw Error(ErrorKind::Config, "scenario is for command '" + *given + "', not '" + command + "'");
    base.sections["scenario"]["command"] = command;
  }
  for (const auto& o : overrides) apply_override(base, o);
  validate_keys(base);
  std::vector<Job> jobs;
  auto names = variant_names(base);
  if (names.empty()) names.push_back("");
  for (const auto& v : names) {
    Job j;
    j.variant = v;
    // Command-line overrides win over variant settings.
    RawScenario merged = with_variant(base, v);
    for (const auto& o : overrides) apply_override(merged, o);
    j.scenario = resolve(merged);
    check_scenario(j.scenario);
    j.stem = j.scenario.name + (v.empty() ? "" : "_" + v);
    jobs.push_back(std::move(j));
  }
  return jobs;
}

inline nlohmann::json raw_to_json(const RawScenario& raw) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [sec, body] : raw.sections)
    for (const auto& [k, v] : body) j[sec][k] = v;
  return j;
}

inline RawScenario raw_from_json(const nlohmann::json& j) {
  RawScenario raw;
  if (!j.is_object()) throw Error(ErrorKind::Config, "sidecar 'scenario' is not an object");
  for (const auto& [sec, body] : j.items()) {
    if (!body.is_object()) throw Error(ErrorKind::Config, "sidecar section '" + sec + "' is not an object");
    for (const auto& [k, v] : body.items()) {
      if (!v.is_string()) throw Error(ErrorKind::Config, "sidecar value " + sec + "." + k + " is not a string");
      raw.sections[sec][k] = v.get<std::string>();
    }
  }
  return raw;
}

struct JobReport {
  std::string stem;
  std::vector<std::filesystem::path> files;
  std::size_t points = 0, failures = 0;
};

/// Runs one job and writes its CSV tables plus the JSON sidecar into out_dir.
inline JobReport execute(const Job& job, const std::filesystem::path& out_dir, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out = run_command(job.scenario, jobs);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir);
  JobReport rep;
  rep.stem = job.stem;
  rep.points = out.points;
  rep.failures = out.failures;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& t : out.tables) {
    const auto path = out_dir / (job.stem + t.suffix + ".csv");
    write_atomic(path, to_csv(t));
    rep.files.push_back(path);
    files.push_back({{"file", path.filename().string()}, {"columns", t.header}, {"rows", t.rows.size()}});
  }
  nlohmann::json meta;
  meta["tool"] = "kerrcat";
  meta["version"] = kVersion;
  meta["command"] = job.scenario.command;
  meta["stem"] = job.stem;
  meta["variant"] = job.variant;
  meta["scenario"] = raw_to_json(job.scenario.raw);
  meta["resolved"] = derived_params(job.scenario);
  meta["resolved"].update(out.derived);
  meta["points"] = out.points;
  meta["failures"] = out.failures;
  meta["failed_points"] = out.failed;
  meta["files"] = files;
  meta["jobs"] = jobs;
  meta["wall_time_s"] = wall;
  const auto side = out_dir / (job.stem + ".json");
  write_atomic(side, meta.dump(2) + "\n");
  rep.files.push_back(side);
  return rep;
}

/// More than 10% failed points.
inline bool too_many_failures(const JobReport& r) { return r.points > 0 && 10 * r.failures > r.points; }

}  // namespace kerrcat

#endif  // KERRCAT_RUNNER_HPP
