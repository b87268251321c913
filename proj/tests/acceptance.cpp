// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>

#include "kerrcat/runner.hpp"

using namespace kerrcat;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kEigenResidual = 1e-6;
constexpr double kZeroSplitting = 1e-6;
constexpr double kFloquetMaxError = 0.2;
constexpr double kRampOverlap = 0.99, kRampPhotonTol = 0.3;
constexpr double kPlateauTol = 0.05, kRwaTol = 0.10;
constexpr double kLambdaTrackFactor = 2.0;
constexpr double kSpikeTol = 0.2;
constexpr double kLeakResonant = 5e-3, kPopTol = 0.02, kLeakDetuned = 0.05;
constexpr double kOracleTol = 0.01;
constexpr double kDephasingClose = 0.10, kDephasingSuppression = 10.0;
constexpr double kRatioLo = 2.0, kRatioHi = 30.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Series {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t failures = 0;

  std::vector<double> col(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("no column " + name);
    const auto k = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
};

Series run_preset(const std::string& name, const std::string& variant, const std::vector<std::string>& overrides = {},
                  std::size_t table = 0) {
  const auto jobs = plan_jobs(load_scenario((fs::path(KERRCAT_PRESET_DIR) / (name + ".ini")).string()), "", overrides);
  for (const auto& j : jobs) {
    if (j.variant != variant) continue;
    const RunOutput out = run_command(j.scenario, default_jobs());
    return {out.tables.at(table).header, out.tables.at(table).rows, out.failures};
  }
  throw std::runtime_error("no variant " + variant + " in " + name);
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::vector<double> local_maxima(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out;
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || y[i] > y[i - 1];
    const bool right = i + 1 == n || y[i] >= y[i + 1];
    if (left && right) out.push_back(x[i]);
  }
  return out;
}

double nearest(const std::vector<double>& xs, double target) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : xs)
    if (std::abs(x - target) < std::abs(best - target)) best = x;
  return best;
}

// ---------------------------------------------------------------------------

Verdict c1_eigenstates() {
  // Residual in units of K (K = 1).
  double worst = 0.0;
  for (double e : {1.0, 2.0, 4.0}) {
    const FockSpace s{60};
    HamiltonianSpec spec;
    spec.kind = HamiltonianKind::RKC;
    spec.space = s;
    spec.params = EffectiveParams::kerr_units(1.0, e);
    const Operator H = build_static(spec);
    for (double sign : {1.0, -1.0}) {
      const auto psi = coherent_state(sign * std::sqrt(e), s);
      const cplx E = expect(H, psi);
      worst = std::max(worst, (H.data * psi.amp - E * psi.amp).norm());
    }
  }
  return {worst <= kEigenResidual, fmt("max residual %.3g (limit %.0e)", worst, kEigenResidual)};
}

Verdict c2_degeneracy() {
  const auto base = run_preset("fig2cd", "lambda0", {}, 1);
  // Rows: axis, pair, cluster, cluster_center, cluster_size
  const auto centers = base.col("cluster_center"), sizes = base.col("cluster_size"), pairs = base.col("pair");
  bool ok = true;
  std::string found;
  for (int m = 0; m <= 3; ++m) {
    std::vector<int> members;
    for (std::size_t i = 0; i < centers.size(); ++i)
      if (std::abs(centers[i] - 2.0 * m) < kZeroSplitting) members.push_back(static_cast<int>(pairs[i]));
    std::sort(members.begin(), members.end());
    std::vector<int> expected(static_cast<std::size_t>(m + 1));
    std::iota(expected.begin(), expected.end(), 0);
    ok = ok && members == expected;
    found += fmt(" %d@%d", static_cast<int>(members.size()), 2 * m);
  }
  // Lambda/K = 0.12: shift of the first pair-0 crossing from Delta/K = 2, at increasing eps2/K.
  std::vector<double> shifts;
  for (double e : {1.0, 2.0, 3.0}) {
    const auto lam = run_preset("fig2cd", "lambda012", {"hamiltonian.eps2_over_K=" + std::to_string(e)}, 1);
    const auto axis = lam.col("Delta_over_K"), pr = lam.col("pair");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < axis.size(); ++i)
      if (pr[i] == 0 && axis[i] > 0.5) best = std::min(best, std::abs(axis[i] - 2.0));
    shifts.push_back(best);
  }
  const bool grows = shifts[0] > kZeroSplitting && shifts[1] > shifts[0] && shifts[2] > shifts[1];
  return {ok && grows, fmt("cluster sizes%s; Lambda shifts %.4f %.4f %.4f", found.c_str(), shifts[0], shifts[1],
                           shifts[2])};
}

Verdict c3_floquet() {
  const auto s = run_preset("fig3a", "");
  const double worst = max_of(s.col("abs_error_over_K"));
  return {s.failures == 0 && worst <= kFloquetMaxError,
          fmt("max |quasi - effective|/K = %.4f (limit %.2f), %zu failed points", worst, kFloquetMaxError, s.failures)};
}

Verdict c4_ramp() {
  const auto s = run_preset("fig3b", "");
  const double ov = s.col("overlap").back(), n = s.col("n_mean").back(), e = s.col("eps2_over_K").back();
  return {ov >= kRampOverlap && std::abs(n - e) <= kRampPhotonTol,
          fmt("final overlap %.4f (>= %.2f), <n> = %.3f vs eps2/K = %.1f (tol %.1f)", ov, kRampOverlap, n, e,
              kRampPhotonTol)};
}

Verdict c5_staircase() {
  const auto rwa = run_preset("fig4", "rwa"), o2 = run_preset("fig4", "o2");
  const auto x = rwa.col("eps2_over_K"), T = rwa.col("T_alpha_us"), T2 = o2.col("T_alpha_us");
  const auto f = staircase_features(x, T);
  CircuitParams c;
  c.M = c.N = 10;
  const double expected = 1.0 / BathSpec::flat(units::rate_from_hz(8e3), 0.05, c.omega_d).gamma(FreqLabel::Half);
  // First plateau reached after the first saturated rise.
  double level = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : f.plateaus)
    if (!f.rises.empty() && p.start >= f.rises.front().end) {
      level = p.level;
      break;
    }
  double dev = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i) dev = std::max(dev, std::abs(T2[i] / T[i] - 1.0));
  const double plateau_err = std::abs(level / expected - 1.0);
  return {f.cycles >= 2 && plateau_err <= kPlateauTol && dev < kRwaTol,
          fmt("%d cycles; plateau %.0f us vs 1/(gamma n) = %.0f us (%.2f%%); o2 vs RWA max %.2f%%", f.cycles, level,
              expected, 100 * plateau_err, 100 * dev)};
}

Verdict c6_dip() {
  const auto raw = run_preset("fig5", "m2n2"), comp = run_preset("fig5", "m2n2_comp"),
             lam0 = run_preset("fig5", "m2n2_lam0");
  const auto x = raw.col("eps2_over_K"), T = raw.col("T_alpha_us"), Tc = comp.col("T_alpha_us"),
             T0 = lam0.col("T_alpha_us");
  // A dip: an interior point in (0, 5) below both neighbours.
  double dip_at = -1.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (x[i] > 0 && x[i] < 5 && T[i] < T[i - 1] && T[i] < T[i + 1]) {
      dip_at = x[i];
      break;
    }
  const auto f = staircase_features(x, Tc);
  double plateau_start = x.back();
  for (const auto& p : f.plateaus)
    if (p.start > 0) {
      plateau_start = p.start;
      break;
    }
  bool monotone = true;
  double first_drop = -1.0;
  for (std::size_t i = 1; i < x.size() && x[i] <= plateau_start; ++i)
    if (Tc[i] < Tc[i - 1] * (1.0 - 1e-9)) {
      monotone = false;
      first_drop = x[i];
      break;
    }
  double worst = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max({worst, Tc[i] / T0[i], T0[i] / Tc[i]});
  return {dip_at > 0 && monotone && worst <= kLambdaTrackFactor,
          fmt("dip in (0,5): %s; compensated monotone to %.1f: %s; compensated vs Lambda=0 max factor %.2f",
              dip_at > 0 ? fmt("yes at %.1f", dip_at).c_str() : "no", plateau_start,
              monotone ? "yes" : fmt("no, drops at %.1f", first_drop).c_str(), worst)};
}

Verdict c7_spikes() {
  const auto big = run_preset("fig6a", "m10n10"), small = run_preset("fig6a", "m2n2");
  const auto x = big.col("Delta_over_K");
  const auto mb = local_maxima(x, big.col("T_alpha_us")), ms = local_maxima(x, small.col("T_alpha_us"));
  bool all = true;
  double worst = 0.0, shift_small = 0.0;
  for (int m = 0; m <= 4; ++m) {
    const double d = std::abs(nearest(mb, 2.0 * m) - 2.0 * m);
    worst = std::max(worst, d);
    all = all && d <= kSpikeTol;
  }
  for (int m = 1; m <= 3; ++m) shift_small = std::max(shift_small, std::abs(nearest(ms, 2.0 * m) - 2.0 * m));
  return {all && shift_small > worst,
          fmt("K = 1.25 MHz: max spike offset %.3f (tol %.1f); K = 31.25 MHz: max offset %.3f", worst, kSpikeTol,
              shift_small)};
}

Verdict c8_steady() {
  const auto res = run_preset("fig7", "resonant"), det = run_preset("fig7", "detuned");
  const auto x = res.col("eps2_over_K");
  const double leak_res = max_of(res.col("P_leak"));
  const double P1 = res.col("P1").back(), P2 = res.col("P2").back();
  double leak_det = 0.0;
  const auto ld = det.col("P_leak");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0 && x[i] < 2.1) leak_det = std::max(leak_det, ld[i]);
  const bool ok = leak_res < kLeakResonant && std::abs(P1 - 0.5) <= kPopTol && std::abs(P2 - 0.5) <= kPopTol &&
                  leak_det > kLeakDetuned;
  return {ok, fmt("resonant max P_leak %.4g (< %.0e); P1 %.4f P2 %.4f at eps2/K=4; detuned max P_leak %.3f (> %.2f)",
                  leak_res, kLeakResonant, P1, P2, leak_det, kLeakDetuned)};
}

// Full-Liouvillian T_alpha: the odd-sector eigenmode that overlaps the ground coherences most. The slowest odd
// mode overall can belong to near-degenerate pairs at the cutoff.
double full_liouvillian_T(const Operator& H, const DissipatorList& terms) {
  const int d = H.space.dim;
  const Matrix L = build_superoperator(MasterEquation(H, terms));
  const auto odd = detail::sector_indices(d, 1);
  const auto pe = parity_eigen(H);
  const Vector up = pe.even.vectors.col(0), um = pe.odd.vectors.col(0);
  const Vector x1 = vec(up * um.adjoint())(odd), x2 = vec(um * up.adjoint())(odd);
  Eigen::ComplexEigenSolver<Matrix> es(L(odd, odd), true);
  double best_w = 0.0;
  cplx best;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Vector v = es.eigenvectors().col(k).normalized();
    const double w = std::norm(x1.dot(v)) + std::norm(x2.dot(v));
    if (w > best_w) {
      best_w = w;
      best = es.eigenvalues()(k);
    }
  }
  return -1.0 / best.real();
}

Verdict c9_oracle() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> e2(0.0, 3.0);
  std::uniform_int_distribution<int> dims(16, 20);
  struct Case {
    const char* name;
    DissipatorSet set;
    Topology topo;
    int M, N;
    double E_C;
    double gamma_phi_over_K;
  };
  const Case cases[] = {{"o2-rwa", DissipatorSet::O2Rwa, Topology::STS, 2, 4, 250.0, 0.0},
                        {"o2", DissipatorSet::O2, Topology::STS, 2, 4, 250.0, 0.0},
                        {"o34", DissipatorSet::O34, Topology::STS, 2, 2, 250.0, 0.0},
                        {"squid", DissipatorSet::Squid, Topology::SQUID, 1, 1, 62.5, 0.0},
                        {"o2+dephasing", DissipatorSet::O2, Topology::STS, 2, 4, 250.0, 1e-4}};
  double worst = 0.0;
  std::string per_set;
  for (const auto& cs : cases) {
    double set_worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      CircuitParams c;
      c.topology = cs.topo;
      c.M = cs.M;
      c.N = cs.N;
      c.E_C = cs.E_C;
      c.delta_phi = delta_phi_for_eps2(c, e2(rng));
      LifetimeConfig cfg;
      cfg.set = cs.set;
      cfg.bath = BathSpec::flat(units::rate_from_hz(8e3), 0.05, c.omega_d);
      cfg.gamma_phi_over_K = cs.gamma_phi_over_K;
      const auto p = lifetime_params(c, cfg);
      const auto [H, terms] = lifetime_system(p, c.topology, cfg)(FockSpace(dims(rng)));
      const double full = full_liouvillian_T(H, terms);
      const auto pe = parity_eigen(H);
      const int M = AdaptiveOptions{}.M0;
      const double block = t_alpha(coherence_block(pe, terms, M)).T;
      set_worst = std::max(set_worst, std::abs(block / full - 1.0));
    }
    worst = std::max(worst, set_worst);
    per_set += fmt(" %s %.2e", cs.name, set_worst);
  }
  return {worst <= kOracleTol, "max relative deviation:" + per_set};
}

Verdict c10_dephasing() {
  const char* names[] = {"g0", "g1e-6", "g1e-5", "g1e-4"};
  std::vector<std::vector<double>> T;
  for (const char* n : names) T.push_back(run_preset("fig10", n).col("T_alpha_us"));
  const auto x = run_preset("fig10", "g0").col("eps2_over_K");
  bool monotone = true;
  for (std::size_t k = 1; k < T.size(); ++k)
    for (std::size_t i = 0; i < x.size(); ++i) monotone = monotone && T[k][i] <= T[k - 1][i] * (1.0 + 1e-9);
  double close = 0.0, close_at = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(T[1][i] / T[0][i] - 1.0);
    if (d > close) {
      close = d;
      close_at = x[i];
    }
  }
  const auto f = staircase_features(x, T[0]);
  double suppression = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : f.plateaus)
    if (!f.rises.empty() && p.start >= f.rises.front().end) {
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= p.start && x[i] <= p.end) lo = std::min(lo, T[0][i] / T[3][i]);
      suppression = lo;
      break;
    }
  return {monotone && close <= kDephasingClose && suppression >= kDephasingSuppression,
          fmt("monotone in gamma_phi: %s; 1e-6 vs 0 max deviation %.1f%% at eps2/K = %.1f (tol %.0f%%); "
              "1e-4 plateau suppression %.1fx (>= %.0fx)",
              monotone ? "yes" : "no", 100 * close, close_at, 100 * kDephasingClose, suppression,
              kDephasingSuppression)};
}

Verdict c11_squid() {
  const auto sts = run_preset("fig12", "sts"), squid = run_preset("fig12", "squid");
  const auto x = sts.col("delta_phi");
  auto onset = [&](const std::vector<double>& T) {
    for (std::size_t i = 1; i < T.size(); ++i)
      if (T[i] >= 2.0 * T[0]) return x[i];
    return std::numeric_limits<double>::infinity();
  };
  const double o_sts = onset(sts.col("T_alpha_us")), o_squid = onset(squid.col("T_alpha_us"));
  const double t_sts = run_preset("table1", "sts").col("T_alpha_us").at(0);
  const double t_squid = run_preset("table1", "squid").col("T_alpha_us").at(0);
  const double ratio = t_sts / t_squid;
  return {o_sts < o_squid && ratio >= kRatioLo && ratio <= kRatioHi,
          fmt("rise onset (T doubles) STS %.3f vs SQUID %.3f; eps2/K = 8: STS %.0f us, SQUID %.0f us, ratio %.2f", o_sts,
              o_squid, t_sts, t_squid, ratio)};
}

Verdict c12_invariants() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checks = 0;
  std::vector<std::string> broken;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && std::find(broken.begin(), broken.end(), what) == broken.end()) broken.push_back(what);
  };
  for (int trial = 0; trial < 10; ++trial) {
    // Parity commutation and Hermiticity of the static Hamiltonians.
    const FockSpace s{20};
    auto p = EffectiveParams::kerr_units(0.5 + u(rng), 4 * u(rng), 8 * u(rng) - 4, 0.3 * u(rng) - 0.15);
    p.omega_d = 1000.0;
    for (auto kind : {HamiltonianKind::DKC, HamiltonianKind::STS_EFFECTIVE, HamiltonianKind::SQUID_EFFECTIVE}) {
      HamiltonianSpec spec;
      spec.kind = kind;
      spec.space = s;
      spec.params = p;
      const Operator H = build_static(spec);
      expect(max_abs(commutator(H, parity_operator(s)).data) <= 1e-12 * max_abs(H.data), "parity commutation");
      expect(is_hermitian(H), "hermiticity");
    }
    // Trace preservation and parity-sector decoupling under the RWA single-photon terms.
    HamiltonianSpec spec;
    spec.kind = HamiltonianKind::STS_EFFECTIVE;
    spec.space = FockSpace{10};
    spec.params = p;
    const MasterEquation me(build_static(spec),
                            sts_dissipators_o2(p, BathSpec::fixed_occupation(0.01 + u(rng), u(rng)), spec.space, true));
    const Matrix L = build_superoperator(me);
    Matrix A = Matrix::Random(10, 10);
    A = A + A.adjoint().eval();
    expect(std::abs(apply_lindblad(me, A).trace()) <= 1e-10 * max_abs(L), "trace preservation");
    const auto even = detail::sector_indices(10, 0), odd = detail::sector_indices(10, 1);
    double leak = 0.0;
    for (int i : even)
      for (int j : odd) leak = std::max(leak, std::abs(L(i, j)));
    expect(leak == 0.0, "parity-sector decoupling");
    // Closed forms for a single symmetric junction.
    CircuitParams c;
    c.delta_phi = 0.3 * u(rng);
    const auto q = sts_effective_params(c);
    const double Ec = units::from_mhz(c.E_C);
    expect(std::abs(q.Lambda + c.delta_phi * Ec / 3.0) <= 1e-10 * Ec, "Lambda closed form");
    expect(std::abs(q.eps2 - c.delta_phi * (q.eps_c - 2.0 * Ec) / 4.0) <= 1e-10 * q.eps_c, "eps2 closed form");
    // Dilution composition law.
    std::uniform_int_distribution<int> pick(1, 4);
    const int M1 = pick(rng), N1 = pick(rng), M2 = pick(rng), N2 = pick(rng);
    const auto a = dilution_scaling(dilution_scaling(q, M1, N1), M2, N2), b = dilution_scaling(q, M1 * M2, N1 * N2);
    expect(std::abs(a.K - b.K) <= 1e-12 * b.K && std::abs(a.eps2 - b.eps2) <= 1e-12 * std::abs(b.eps2) + 1e-300 &&
               std::abs(a.Lambda - b.Lambda) <= 1e-12 * std::abs(b.Lambda) + 1e-300,
           "dilution composition");
  }
  // Unitarity of the one-period propagator and norm conservation of the ramp.
  CircuitParams c;
  c.M = 2;
  c.N = 4;
  c.delta_phi = delta_phi_for_eps2(c, 2.0);
  FloquetOptions fo;
  fo.n_steps_initial = 64;
  expect(floquet_quasienergies(c, FockSpace{16}, 3, fo).unitarity_error <= 1e-8, "Floquet unitarity");
  RampSchedule rs;
  rs.eps2_final_over_K = 2.0;
  rs.duration_K = 8.0;
  rs.dt_K = 0.05;
  // The ramp itself throws on norm drift.
  const auto ramp = adiabatic_ramp(c, rs, FockSpace{24});
  expect(ramp.overlap.size() == 101u && max_of(ramp.overlap) <= 1.0 + 1e-9, "ramp norm");
  std::string detail = fmt("%d checks", checks);
  for (const auto& b : broken) detail += "; broken: " + b;
  return {broken.empty(), detail};
}

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
      {1, c1_eigenstates}, {2, c2_degeneracy}, {3, c3_floquet},     {4, c4_ramp},
      {5, c5_staircase},   {6, c6_dip},        {7, c7_spikes},      {8, c8_steady},
      {9, c9_oracle},      {10, c10_dephasing}, {11, c11_squid},    {12, c12_invariants}};
  int failed = 0, ran = 0;
  for (const auto& [n, check] : criteria) {
    if (!only.empty() && !only.contains(n)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", n, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria failed\n", failed, ran);
  return failed;
}
