#ifndef KERRCAT_SPECTRA_HPP
#define KERRCAT_SPECTRA_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "kerrcat/circuit.hpp"
#include "kerrcat/fock.hpp"
#include "kerrcat/hamiltonian.hpp"

namespace kerrcat {

/// Eigensystem of one parity sector, energies descending, vectors embedded in the full space.
struct SectorEigen {
  Eigen::VectorXd values;
  Matrix vectors;  // d x k
};

struct ParityEigen {
  SectorEigen even, odd;
};

inline std::vector<int> parity_indices(int dim, int parity) {
  std::vector<int> idx;
  for (int n = (parity == 1 ? 0 : 1); n < dim; n += 2) idx.push_back(n);
  return idx;
}

/// Largest matrix element coupling opposite parities, relative to the largest element.
inline double parity_contamination(const Matrix& H) {
  double off = 0.0;
  for (Eigen::Index j = 0; j < H.cols(); ++j)
    for (Eigen::Index i = (j + 1) % 2; i < H.rows(); i += 2) off = std::max(off, std::abs(H(i, j)));
  const double scale = max_abs(H);
  return scale > 0 ? off / scale : 0.0;
}

inline constexpr double kParityTolerance = 1e-6;

inline Matrix sector_block(const Matrix& H, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix B(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) B(i, j) = H(idx[i], idx[j]);
  return B;
}

inline SectorEigen sector_eigen(const Matrix& H, int parity) {
  const auto idx = parity_indices(static_cast<int>(H.rows()), parity);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sector_block(H, idx));
  const auto k = static_cast<Eigen::Index>(idx.size());
  SectorEigen s;
  s.values.resize(k);
  s.vectors = Matrix::Zero(H.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = k - 1 - c;  // ascending -> descending
    s.values(c) = es.eigenvalues()(src);
    for (Eigen::Index r = 0; r < k; ++r) s.vectors(idx[r], c) = es.eigenvectors()(r, src);
  }
  return s;
}

inline ParityEigen parity_eigen(const Operator& H) {
  if (parity_contamination(H.data) > kParityTolerance)
    throw Error(ErrorKind::NonParitySymmetric, "Hamiltonian couples even and odd Fock states");
  return {sector_eigen(H.data, 1), sector_eigen(H.data, -1)};
}

struct LevelPair {
  double E_plus = 0.0;   // relative to the top even level
  double E_minus = 0.0;
  double delta = 0.0;    // E_plus - E_minus
  Vector v_plus, v_minus;
};

/// Levels paired by index inside each parity sector. H is bounded above, so the
/// cat manifold sits at the top of the spectrum and index 0 is the highest level.
struct PairedSpectrum {
  FockSpace space;
  double E_ref = 0.0;  // absolute energy of the top even level
  std::vector<LevelPair> levels;
};

inline PairedSpectrum paired_spectrum(const Operator& H, int n_pairs) {
  const ParityEigen pe = parity_eigen(H);
  const int avail = static_cast<int>(std::min(pe.even.values.size(), pe.odd.values.size()));
  if (n_pairs < 1 || n_pairs > avail)
    throw Error(ErrorKind::Size, "n_pairs = " + std::to_string(n_pairs) + " but only " + std::to_string(avail) +
                                     " pairs available");
  PairedSpectrum ps;
  ps.space = H.space;
  ps.E_ref = pe.even.values(0);
  for (int m = 0; m < n_pairs; ++m) {
    LevelPair lp;
    lp.E_plus = pe.even.values(m) - ps.E_ref;
    lp.E_minus = pe.odd.values(m) - ps.E_ref;
    lp.delta = pe.even.values(m) - pe.odd.values(m);
    lp.v_plus = pe.even.vectors.col(m);
    lp.v_minus = pe.odd.vectors.col(m);
    ps.levels.push_back(std::move(lp));
  }
  return ps;
}

enum class ScanAxis { Delta, Eps2 };

struct DegeneracyCrossing {
  double value = 0.0;  // axis value in units of K
  int m = 0;
};

struct DegeneracyCluster {
  double center = 0.0;
  std::vector<int> members;  // pair indices with a zero splitting here
};

struct DegeneracyScan {
  std::vector<double> axis;                 // units of K
  std::vector<std::vector<double>> deltas;  // [point][m], delta_m / K
  std::vector<DegeneracyCrossing> crossings;
  std::vector<DegeneracyCluster> clusters;
  int tracking_warnings = 0;  // adjacent-point eigenvector overlap below 0.5
};

struct DegeneracyOptions {
  int n_pairs = 6;
  double tol_cross = 1e-6;     // |delta|/K counted as zero
  double cluster_width = 0.05;  // axis units of K
  HamiltonianKind kind = HamiltonianKind::STS_EFFECTIVE;
};

/// Splittings along Delta/K or eps2/K with the other coefficients of `base` held fixed.
inline DegeneracyScan degeneracy_scan(const EffectiveParams& base, ScanAxis axis, const std::vector<double>& values,
                                      FockSpace space, const DegeneracyOptions& opt = {}) {
  const double K = base.K;
  if (K <= 0) throw Error(ErrorKind::Domain, "degeneracy_scan needs K > 0");
  auto spectrum_at = [&](double v) {
    HamiltonianSpec spec;
    spec.kind = opt.kind;
    spec.space = space;
    spec.params = base;
    (axis == ScanAxis::Delta ? spec.params.Delta : spec.params.eps2) = v * K;
    return paired_spectrum(build_static(spec), opt.n_pairs);
  };
  auto delta_at = [&](double v, int m) { return spectrum_at(v).levels[static_cast<size_t>(m)].delta / K; };

  DegeneracyScan out;
  out.axis = values;
  std::vector<PairedSpectrum> specs;
  for (double v : values) {
    specs.push_back(spectrum_at(v));
    std::vector<double> row;
    for (const auto& lp : specs.back().levels) row.push_back(lp.delta / K);
    out.deltas.push_back(std::move(row));
  }

  for (size_t i = 0; i + 1 < values.size(); ++i) {
    for (int m = 0; m < opt.n_pairs; ++m) {
      const auto& a = specs[i].levels[static_cast<size_t>(m)];
      const auto& b = specs[i + 1].levels[static_cast<size_t>(m)];
      if (std::abs(a.v_plus.dot(b.v_plus)) < 0.5 || std::abs(a.v_minus.dot(b.v_minus)) < 0.5) ++out.tracking_warnings;
    }
  }

  std::vector<DegeneracyCrossing> raw;
  for (size_t i = 0; i < values.size(); ++i) {
    for (int m = 0; m < opt.n_pairs; ++m) {
      const double d0 = out.deltas[i][static_cast<size_t>(m)];
      if (std::abs(d0) < opt.tol_cross) raw.push_back({values[i], m});
      if (i + 1 == values.size()) continue;
      const double d1 = out.deltas[i + 1][static_cast<size_t>(m)];
      if (std::abs(d1) < opt.tol_cross || std::abs(d0) < opt.tol_cross) continue;
      if ((d0 < 0) == (d1 < 0)) continue;
      std::uintmax_t iters = 100;
      auto f = [&](double v) { return delta_at(v, m); };
      const auto r = boost::math::tools::toms748_solve(f, values[i], values[i + 1], d0, d1,
                                                       boost::math::tools::eps_tolerance<double>(40), iters);
      raw.push_back({0.5 * (r.first + r.second), m});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return a.value != b.value ? a.value < b.value : a.m < b.m;
  });
  // Same pair touching zero on adjacent samples is one crossing.
  for (const auto& c : raw) {
    bool dup = false;
    for (auto& e : out.crossings)
      if (e.m == c.m && std::abs(e.value - c.value) < 1e-6) dup = true;
    if (!dup) out.crossings.push_back(c);
  }

  for (const auto& c : out.crossings) {
    if (!out.clusters.empty() && c.value - out.clusters.back().center <= opt.cluster_width) {
      auto& cl = out.clusters.back();
      if (std::find(cl.members.begin(), cl.members.end(), c.m) == cl.members.end()) cl.members.push_back(c.m);
      continue;
    }
    out.clusters.push_back({c.value, {c.m}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Floquet

struct FloquetLevel {
  int level = 0;              // index in the effective spectrum, descending energy
  double quasi_gap = 0.0;     // |eps_n - eps_0| folded, rad/us
  double effective_gap = 0.0; // |E_n - E_0|, rad/us
  double overlap = 0.0;       // |<floquet|effective>|^2
};

struct FloquetResult {
  std::vector<FloquetLevel> levels;
  std::vector<double> quasienergies;  // folded into [0, omega_d)
  int n_steps = 0;
  double unitarity_error = 0.0;
};

struct FloquetOptions {
  int n_steps_initial = 256;
  int n_steps_max = 1 << 16;
  double convergence = 1e-8;  // relative to omega_d
};

namespace detail {
/// Components of (a z^-1 + a^dag z)^n keyed by the power of z.
inline std::map<int, Matrix> quadrature_power_components(const Ladder& L, int n) {
  std::map<int, Matrix> cur{{0, Matrix::Identity(L.a.space.dim, L.a.space.dim)}};
  for (int k = 0; k < n; ++k) {
    std::map<int, Matrix> next;
    for (const auto& [pw, mtx] : cur) {
      auto add = [&](int key, Matrix m) {
        auto it = next.find(key);
        if (it == next.end())
          next.emplace(key, std::move(m));
        else
          it->second += m;
      };
      add(pw - 1, mtx * L.a.data);
      add(pw + 1, mtx * L.adag.data);
    }
    cur = std::move(next);
  }
  return cur;
}

inline Matrix exp_hermitian(const Matrix& H, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  const Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline double fold_gap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r > 0.5 * period) r -= period;
  return std::abs(r);
}
}  // namespace detail

/// One-period propagator of the rotating-frame lab Hamiltonian at omega_d/2, per parity sector.
/// Needs symmetric drive-branch junctions so that the rotating-frame Hamiltonian has period 2pi/omega_d.
class FloquetPropagator {
 public:
  FloquetPropagator(const CircuitParams& c, FockSpace space, bool exact_drive)
      : c_(c), space_(space), exact_(exact_drive) {
    if (c.topology != Topology::STS) throw Error(ErrorKind::Topology, "Floquet analysis needs an STS circuit");
    if (c.E_JDelta() != 0.0)
      throw Error(ErrorKind::Domain, "Floquet analysis needs E_J1 == E_J3 (odd drive terms break the period)");
    const EffectiveParams p = sts_effective_params(c);
    const Ladder L = ladder_ops(space);
    const double M2 = static_cast<double>(c.M) * c.M;
    const double phi2 = p.phi_zps * p.phi_zps;
    H0_ = (p.eps_c - 2.0 * p.K - 0.5 * c.omega_d) * L.n.data - p.K * (L.adag * L.adag * L.a * L.a).data;
    // -2 E_JSigma s(t) [ -phi^2 X^2 / 2 + phi^4 X^4 / (24 M^2) ], X = a e^{-i theta} + a^dag e^{i theta}
    for (const auto& [k, m] : detail::quadrature_power_components(L, 2)) add_component(k, (phi2 * p.E_JSigma) * m);
    for (const auto& [k, m] : detail::quadrature_power_components(L, 4))
      add_component(k, (-2.0 * p.E_JSigma * phi2 * phi2 / (24.0 * M2)) * m);
  }

  double period() const { return 2.0 * std::numbers::pi / c_.omega_d; }

  Matrix hamiltonian(double t) const {
    const double s = exact_ ? std::sin(c_.delta_phi * std::cos(c_.omega_d * t)) : c_.delta_phi * std::cos(c_.omega_d * t);
    Matrix H = H0_;
    const double theta = 0.5 * c_.omega_d * t;
    for (const auto& [k, m] : drive_) H += (s * std::polar(1.0, k * theta)) * m;
    return 0.5 * (H + H.adjoint());
  }

  /// Parity-sector propagators over one period with n_steps midpoint exponentials.
  std::array<Matrix, 2> propagate(int n_steps) const {
    const double dt = period() / n_steps;
    const auto even = parity_indices(space_.dim, 1), odd = parity_indices(space_.dim, -1);
    std::array<Matrix, 2> U{Matrix::Identity(static_cast<Eigen::Index>(even.size()), static_cast<Eigen::Index>(even.size())),
                            Matrix::Identity(static_cast<Eigen::Index>(odd.size()), static_cast<Eigen::Index>(odd.size()))};
    for (int k = 0; k < n_steps; ++k) {
      const Matrix H = hamiltonian((k + 0.5) * dt);
      U[0] = detail::exp_hermitian(sector_block(H, even), dt) * U[0];
      U[1] = detail::exp_hermitian(sector_block(H, odd), dt) * U[1];
    }
    return U;
  }

  FockSpace space() const { return space_; }

 private:
  void add_component(int k, const Matrix& m) {
    auto it = drive_.find(k);
    if (it == drive_.end())
      drive_.emplace(k, m);
    else
      it->second += m;
  }

  CircuitParams c_;
  FockSpace space_;
  bool exact_;
  Matrix H0_;
  std::map<int, Matrix> drive_;
};

namespace detail {
struct FloquetModes {
  std::vector<double> quasi;  // unfolded -arg/T
  Matrix vectors;             // full-space columns
  double unitarity_error = 0.0;
};

inline FloquetModes floquet_modes(const std::array<Matrix, 2>& U, FockSpace space, double T) {
  FloquetModes fm;
  fm.vectors = Matrix::Zero(space.dim, space.dim);
  Eigen::Index col = 0;
  for (int s = 0; s < 2; ++s) {
    const Matrix& u = U[static_cast<size_t>(s)];
    fm.unitarity_error = std::max(fm.unitarity_error, max_abs(u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())));
    Eigen::ComplexEigenSolver<Matrix> es(u);
    const auto idx = parity_indices(space.dim, s == 0 ? 1 : -1);
    for (Eigen::Index j = 0; j < u.rows(); ++j) {
      fm.quasi.push_back(-std::arg(es.eigenvalues()(j)) / T);
      Vector v = es.eigenvectors().col(j).normalized();
      for (Eigen::Index r = 0; r < u.rows(); ++r) fm.vectors(idx[static_cast<size_t>(r)], col) = v(r);
      ++col;
    }
  }
  return fm;
}
}  // namespace detail

/// Quasienergy gaps of the driven circuit matched against the static effective spectrum.
inline FloquetResult floquet_quasienergies(const CircuitParams& c, FockSpace space, int n_levels,
                                           const FloquetOptions& opt = {}, bool exact_drive = false) {
  const FloquetPropagator fp(c, space, exact_drive);
  const double T = fp.period(), wd = c.omega_d;

  HamiltonianSpec spec;
  spec.kind = HamiltonianKind::STS_EFFECTIVE;
  spec.space = space;
  spec.params = sts_effective_params(c);
  const Operator Heff = build_static(spec);
  Eigen::SelfAdjointEigenSolver<Matrix> es(Heff.data);
  const int d = space.dim;
  if (n_levels + 1 > d) throw Error(ErrorKind::Size, "n_levels exceeds the space");

  auto match = [&](const detail::FloquetModes& fm) {
    std::vector<FloquetLevel> out;
    std::vector<bool> used(static_cast<size_t>(d), false);
    std::vector<int> chosen;
    for (int n = 0; n <= n_levels; ++n) {
      const Vector e = es.eigenvectors().col(d - 1 - n);
      int best = -1;
      double best_ov = -1;
      for (int j = 0; j < d; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double ov = std::norm(fm.vectors.col(j).dot(e));
        if (ov > best_ov) {
          best_ov = ov;
          best = j;
        }
      }
      used[static_cast<size_t>(best)] = true;
      chosen.push_back(best);
      FloquetLevel lv;
      lv.level = n;
      lv.overlap = best_ov;
      lv.effective_gap = std::abs(es.eigenvalues()(d - 1 - n) - es.eigenvalues()(d - 1));
      lv.quasi_gap = detail::fold_gap(fm.quasi[static_cast<size_t>(best)] - fm.quasi[static_cast<size_t>(chosen[0])], wd);
      out.push_back(lv);
    }
    return out;
  };

  int n = opt.n_steps_initial;
  auto fm = detail::floquet_modes(fp.propagate(n), space, T);
  auto levels = match(fm);
  for (;;) {
    if (2 * n > opt.n_steps_max)
      throw Error(ErrorKind::PropagatorAccuracy, "Floquet gaps did not converge by " + std::to_string(n) + " steps");
    auto fm2 = detail::floquet_modes(fp.propagate(2 * n), space, T);
    auto levels2 = match(fm2);
    double change = 0.0;
    for (size_t i = 0; i < levels.size(); ++i) change = std::max(change, std::abs(levels2[i].quasi_gap - levels[i].quasi_gap));
    n *= 2;
    fm = std::move(fm2);
    levels = std::move(levels2);
    if (change < opt.convergence * wd) break;
  }
  if (fm.unitarity_error > 1e-8)
    throw Error(ErrorKind::PropagatorAccuracy, "one-period propagator is not unitary to 1e-8");

  FloquetResult r;
  r.levels = std::move(levels);
  r.n_steps = n;
  r.unitarity_error = fm.unitarity_error;
  for (double q : fm.quasi) {
    double f = std::fmod(q, wd);
    if (f < 0) f += wd;
    r.quasienergies.push_back(f);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Adiabatic ramp

struct RampSchedule {
  double eps2_final_over_K = 4.0;
  double duration_K = 64.0;  // ramp time in units of 1/K
  double dt_K = 0.01;        // max step in units of 1/K
  int samples = 101;
  DetuningSpec detuning;
};

/// Smooth rise from 0 to 1 on [0, 1].
inline double tanh_profile(double u) {
  const double t3 = std::tanh(3.0);
  return (std::tanh(6.0 * (u - 0.5)) + t3) / (2.0 * t3);
}

struct RampResult {
  std::vector<double> times;  // us
  std::vector<double> eps2_over_K;
  std::vector<double> overlap;
  std::vector<double> n_mean;
  double final_eps2_over_K = 0.0;
};

/// Schrodinger evolution from |0> under the effective Hamiltonian with delta_phi(t) = dp_f s(t/T).
inline RampResult adiabatic_ramp(const CircuitParams& c, const RampSchedule& sch, FockSpace space) {
  const EffectiveParams p0 = effective_params(c);
  const double K = p0.K;
  const double dp_f = delta_phi_for_eps2(c, sch.eps2_final_over_K);
  const double T = sch.duration_K / K;
  const HamiltonianKind kind =
      c.topology == Topology::STS ? HamiltonianKind::STS_EFFECTIVE : HamiltonianKind::SQUID_EFFECTIVE;
  const Ladder L = ladder_ops(space);

  auto params_at = [&](double t) {
    CircuitParams q = c;
    q.delta_phi = T > 0 ? dp_f * tanh_profile(t / T) : 0.0;
    EffectiveParams p = effective_params(q);
    apply_detuning(p, sch.detuning);
    return p;
  };
  auto record = [&](RampResult& r, double t, const StateVector& psi) {
    const EffectiveParams p = params_at(t);
    const double alpha = std::sqrt(std::max(0.0, std::abs(p.eps2) / K));
    // SQUID eps2 < 0 puts the cat on the imaginary axis.
    const cplx a = p.eps2 >= 0 ? cplx(alpha, 0) : cplx(0, alpha);
    const StateVector cat = cat_state(a, 1, space);
    r.times.push_back(t);
    r.eps2_over_K.push_back(p.eps2 / K);
    r.overlap.push_back(std::norm(inner(cat, psi)));
    r.n_mean.push_back(std::real(expect(L.n, psi)));
  };

  RampResult r;
  StateVector psi = StateVector::fock(space, 0);
  const int n_steps = T > 0 ? static_cast<int>(std::ceil(sch.duration_K / sch.dt_K)) : 0;
  const double dt = n_steps > 0 ? T / n_steps : 0.0;
  const int samples = std::max(2, sch.samples);
  int next_sample = 0;
  auto sample_step = [&](int s) { return static_cast<int>(std::llround(static_cast<double>(s) * n_steps / (samples - 1))); };
  const auto even = parity_indices(space.dim, 1);
  Vector ev(static_cast<Eigen::Index>(even.size()));

  for (int k = 0; k <= n_steps; ++k) {
    while (next_sample < samples && sample_step(next_sample) == k) {
      record(r, k * dt, psi);
      ++next_sample;
    }
    if (k == n_steps) break;
    HamiltonianSpec spec;
    spec.kind = kind;
    spec.space = space;
    spec.params = params_at((k + 0.5) * dt);
    const Matrix H = build_static(spec).data;
    // The state starts even and every static Hamiltonian conserves parity.
    for (size_t i = 0; i < even.size(); ++i) ev(static_cast<Eigen::Index>(i)) = psi.amp(even[i]);
    ev = detail::exp_hermitian(sector_block(H, even), dt) * ev;
    for (size_t i = 0; i < even.size(); ++i) psi.amp(even[i]) = ev(static_cast<Eigen::Index>(i));
    if (std::abs(psi.norm() - 1.0) > 1e-8) throw Error(ErrorKind::Integrator, "ramp norm drift exceeds 1e-8");
  }
  r.final_eps2_over_K = r.eps2_over_K.empty() ? 0.0 : r.eps2_over_K.back();
  return r;
}

}  // namespace kerrcat

#endif  // KERRCAT_SPECTRA_HPP
