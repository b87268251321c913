#ifndef KERRCAT_LIFETIME_HPP
#define KERRCAT_LIFETIME_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kerrcat/circuit.hpp"
#include "kerrcat/dissipation.hpp"
#include "kerrcat/hamiltonian.hpp"
#include "kerrcat/parallel.hpp"
#include "kerrcat/spectra.hpp"

namespace kerrcat {

inline constexpr double kLifetimeCap = 1e9;  // us

/// Projection of one dissipator onto the coherence basis X_{m,s} = |psi_m^s><psi_m^-s|.
struct ChannelBlock {
  std::string label;
  double rate = 0.0;
  Matrix contribution;  // 2M x 2M, already multiplied by rate
};

/// Coherence-sector Liouvillian. Index m in [0, M) is X_{m,+}; index M + m is X_{m,-}.
struct CoherenceBlock {
  int n_pairs = 0;
  Eigen::VectorXd delta;  // splittings delta_m = E_m^+ - E_m^-
  std::vector<ChannelBlock> channels;
  Matrix L_eff;
  double tail_population = 0.0;  // worst top-10% Fock weight of the kept eigenvectors
};

namespace detail {
inline Matrix project_channel(const Matrix& O, const Matrix& Vp, const Matrix& Vm) {
  const auto M = Vp.cols();
  const Matrix OdO = O.adjoint() * O;
  const Matrix* V[2] = {&Vp, &Vm};  // s = + -> 0, s = - -> 1
  Matrix out = Matrix::Zero(2 * M, 2 * M);
  for (int s = 0; s < 2; ++s) {
    for (int s2 = 0; s2 < 2; ++s2) {
      const Matrix X = V[s]->adjoint() * O * *V[s2];            // <m^s|O|p^s'>
      const Matrix Y = V[1 - s]->adjoint() * O * *V[1 - s2];    // <m^-s|O|p^-s'>
      Matrix blk = X.cwiseProduct(Y.conjugate());
      if (s == s2) {
        for (Eigen::Index m = 0; m < M; ++m) {
          const double a1 = std::real(V[s]->col(m).dot(OdO * V[s]->col(m)));
          const double a2 = std::real(V[1 - s]->col(m).dot(OdO * V[1 - s]->col(m)));
          blk(m, m) -= 0.5 * (a1 + a2);
        }
      }
      out.block(s * M, s2 * M, M, M) += blk;
    }
  }
  return out;
}
}  // namespace detail

inline CoherenceBlock coherence_block(const ParityEigen& pe, const DissipatorList& terms, int M) {
  const int avail = static_cast<int>(std::min(pe.even.values.size(), pe.odd.values.size()));
  if (M < 1 || M > avail)
    throw Error(ErrorKind::Size, "M_lv = " + std::to_string(M) + " exceeds the " + std::to_string(avail) +
                                     " available level pairs");
  CoherenceBlock cb;
  cb.n_pairs = M;
  const Matrix Vp = pe.even.vectors.leftCols(M), Vm = pe.odd.vectors.leftCols(M);
  cb.delta = pe.even.values.head(M) - pe.odd.values.head(M);
  cb.L_eff = Matrix::Zero(2 * M, 2 * M);
  for (int m = 0; m < M; ++m) {
    cb.L_eff(m, m) = cplx(0, -cb.delta(m));
    cb.L_eff(M + m, M + m) = cplx(0, cb.delta(m));
  }
  for (const auto& t : terms) {
    ChannelBlock ch{t.label, t.rate, t.rate * detail::project_channel(t.jump.data, Vp, Vm)};
    cb.L_eff += ch.contribution;
    cb.channels.push_back(std::move(ch));
  }
  for (int m = 0; m < M; ++m)
    cb.tail_population = std::max({cb.tail_population, tail_population(Vector(Vp.col(m))), tail_population(Vector(Vm.col(m)))});
  return cb;
}

inline CoherenceBlock coherence_block(const Operator& H, const DissipatorList& terms, int M) {
  return coherence_block(parity_eigen(H), terms, M);
}

struct LifetimeValue {
  double T = 0.0;  // us, capped
  cplx lambda;
};

/// Slowest mode with more than half its weight on the ground coherences X_{0,+}, X_{0,-}.
inline LifetimeValue t_alpha(const CoherenceBlock& cb) {
  const int M = cb.n_pairs;
  Eigen::ComplexEigenSolver<Matrix> es(cb.L_eff, true);
  std::optional<cplx> best;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Vector v = es.eigenvectors().col(k);
    const double w = (std::norm(v(0)) + std::norm(v(M))) / v.squaredNorm();
    if (w > 0.5 && (!best || es.eigenvalues()(k).real() > best->real())) best = es.eigenvalues()(k);
  }
  if (!best) {
    std::string spec;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      spec += " (" + std::to_string(es.eigenvalues()(k).real()) + "," + std::to_string(es.eigenvalues()(k).imag()) + ")";
    throw Error(ErrorKind::ModeIdentification, "no mode dominated by the ground coherence; spectrum:" + spec);
  }
  const double re = best->real();
  return {re < -1.0 / kLifetimeCap ? -1.0 / re : kLifetimeCap, *best};
}

// ---------------------------------------------------------------------------

struct AdaptiveOptions {
  int M0 = 4;
  int M_step = 2;
  double tolerance = 0.01;
  double adequacy = kAdequacyThreshold;
  int dim_max = 400;
};

struct LifetimeResult {
  double T = 0.0;
  cplx lambda;
  int M_lv = 0;
  int dim = 0;
  bool converged = false;
  bool adequate = false;
};

using SystemBuilder = std::function<std::pair<Operator, DissipatorList>(FockSpace)>;

/// Grows M_lv until T changes by less than the tolerance, and the Fock cutoff until the
/// kept eigenvectors are adequate.
inline LifetimeResult lifetime_adaptive(const SystemBuilder& build, int dim0, const AdaptiveOptions& opt = {}) {
  int dim = dim0;
  for (;;) {
    const auto [H, terms] = build(FockSpace(dim));
    const ParityEigen pe = parity_eigen(H);
    const int avail = static_cast<int>(std::min(pe.even.values.size(), pe.odd.values.size()));
    const int M_cap = std::max(1, avail - 2);
    bool grow = false;
    std::optional<LifetimeValue> prev;
    LifetimeResult r;
    r.dim = dim;
    for (int M = std::min(opt.M0, M_cap);; M += opt.M_step) {
      M = std::min(M, M_cap);
      const CoherenceBlock cb = coherence_block(pe, terms, M);
      if (cb.tail_population > opt.adequacy && dim < opt.dim_max) {
        grow = true;
        break;
      }
      const LifetimeValue v = t_alpha(cb);
      r.T = v.T;
      r.lambda = v.lambda;
      r.M_lv = M;
      r.adequate = cb.tail_population <= opt.adequacy;
      if (prev && std::abs(v.T - prev->T) <= opt.tolerance * v.T) {
        r.converged = true;
        break;
      }
      if (M >= M_cap) break;
      prev = v;
    }
    if (!grow) {
      if (!r.converged && dim < opt.dim_max) {
        dim = std::min(opt.dim_max, static_cast<int>(std::ceil(dim * 1.5)));
        continue;
      }
      return r;
    }
    dim = std::min(opt.dim_max, static_cast<int>(std::ceil(dim * 1.5)));
  }
}

/// Starting cutoff from the cat size and detuning.
inline int initial_dim(const EffectiveParams& p) {
  if (p.K <= 0) return 30;
  const double e = std::abs(p.eps2) / p.K;
  const double D = std::abs(p.Delta) / p.K;
  return std::max(30, static_cast<int>(std::ceil(8.0 * std::max(e, 0.5 * (D + 2.0 * e)))));
}

// ---------------------------------------------------------------------------

struct LifetimeConfig {
  DissipatorSet set = DissipatorSet::O2Rwa;
  BathSpec bath;
  DetuningSpec detuning;
  double gamma_phi_over_K = 0.0;
  bool drop_lambda = false;  // Lambda = 0 reference curve
  int dim0 = 0;              // 0: from initial_dim
  AdaptiveOptions adaptive;
};

/// Effective parameters used for a lifetime point, including the detuning policy.
inline EffectiveParams lifetime_params(const CircuitParams& c, const LifetimeConfig& cfg) {
  if (cfg.set == DissipatorSet::Squid && c.topology != Topology::SQUID)
    throw Error(ErrorKind::Topology, "squid dissipators need a SQUID circuit");
  if (cfg.set != DissipatorSet::Squid && c.topology == Topology::SQUID)
    throw Error(ErrorKind::Topology, "SQUID circuits use the squid dissipator set");
  EffectiveParams p = cfg.set == DissipatorSet::StrongMod ? strong_modulation_params(c) : effective_params(c);
  if (cfg.drop_lambda) p.Lambda = 0.0;
  apply_detuning(p, cfg.detuning);
  return p;
}

inline SystemBuilder lifetime_system(const EffectiveParams& p, Topology topo, const LifetimeConfig& cfg) {
  return [p, topo, cfg](FockSpace space) {
    HamiltonianSpec spec;
    spec.kind = topo == Topology::SQUID ? HamiltonianKind::SQUID_EFFECTIVE : HamiltonianKind::STS_EFFECTIVE;
    spec.params = p;
    spec.space = space;
    DissipatorList terms = build_dissipators(cfg.set, p, cfg.bath, space);
    if (cfg.gamma_phi_over_K > 0) terms.push_back(dephasing_term(cfg.gamma_phi_over_K * p.K, space));
    return std::make_pair(build_static(spec), std::move(terms));
  };
}

inline LifetimeResult lifetime_point(const CircuitParams& c, const LifetimeConfig& cfg) {
  const EffectiveParams p = lifetime_params(c, cfg);
  return lifetime_adaptive(lifetime_system(p, c.topology, cfg), cfg.dim0 > 0 ? cfg.dim0 : initial_dim(p),
                           cfg.adaptive);
}

// ---------------------------------------------------------------------------

enum class SweepAxis { Eps2Ratio, DetuningRatio, ModulationDepth, GammaPhi };

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Eps2Ratio: return "eps2_over_K";
    case SweepAxis::DetuningRatio: return "Delta_over_K";
    case SweepAxis::ModulationDepth: return "delta_phi";
    case SweepAxis::GammaPhi: return "gamma_phi_over_K";
  }
  return "?";
}

struct SweepPoint {
  double axis = 0.0;
  double T = std::numeric_limits<double>::quiet_NaN();
  double lambda_re = std::numeric_limits<double>::quiet_NaN();
  double eps2_over_K = std::numeric_limits<double>::quiet_NaN();
  double delta_phi = std::numeric_limits<double>::quiet_NaN();
  int M_lv = 0;
  int dim = 0;
  bool ok = false;
  bool converged = false;
  std::string error;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Eps2Ratio;
  std::vector<SweepPoint> points;

  std::vector<double> axis_values() const {
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.axis);
    return v;
  }
  std::vector<double> lifetimes() const {
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.T);
    return v;
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.ok; }));
  }
};

struct SweepOptions {
  double eps2_over_K = 0.0;  // held fixed when the axis is not Eps2Ratio
  int jobs = 1;
};

/// One lifetime per axis value; failures are recorded per point and never abort the sweep.
inline SweepResult sweep(SweepAxis axis, const std::vector<double>& values, const CircuitParams& base,
                         const LifetimeConfig& cfg, const SweepOptions& opt = {}) {
  SweepResult sr;
  sr.axis = axis;
  sr.points.resize(values.size());
  parallel_for(values.size(), opt.jobs, [&](std::size_t i) {
    SweepPoint& pt = sr.points[i];
    pt.axis = values[i];
    try {
      CircuitParams c = base;
      LifetimeConfig lc = cfg;
      switch (axis) {
        case SweepAxis::Eps2Ratio:
          c.delta_phi = delta_phi_for_eps2(c, values[i]);
          break;
        case SweepAxis::DetuningRatio:
          c.delta_phi = delta_phi_for_eps2(c, opt.eps2_over_K);
          lc.detuning.target_over_K = values[i];
          if (lc.detuning.mode == DetuningMode::Formula) lc.detuning.mode = DetuningMode::Target;
          break;
        case SweepAxis::ModulationDepth:
          c.delta_phi = values[i];
          break;
        case SweepAxis::GammaPhi:
          c.delta_phi = delta_phi_for_eps2(c, opt.eps2_over_K);
          lc.gamma_phi_over_K = values[i];
          break;
      }
      const EffectiveParams p = lifetime_params(c, lc);
      const LifetimeResult r =
          lifetime_adaptive(lifetime_system(p, c.topology, lc), lc.dim0 > 0 ? lc.dim0 : initial_dim(p), lc.adaptive);
      pt.T = r.T;
      pt.lambda_re = r.lambda.real();
      pt.M_lv = r.M_lv;
      pt.dim = r.dim;
      pt.converged = r.converged;
      pt.eps2_over_K = p.eps2 / p.K;
      pt.delta_phi = c.delta_phi;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  return sr;
}

// ---------------------------------------------------------------------------

struct Plateau {
  double start = 0.0, end = 0.0, level = 0.0;
};

struct Rise {
  double onset = 0.0, end = 0.0;
  bool saturated = false;  // slope drops back below the rise threshold inside the domain
};

struct StaircaseFeatures {
  std::vector<Plateau> plateaus;
  std::vector<Rise> rises;
  int cycles = 0;  // saturated rises
  std::vector<double> onset_spacing;
};

struct StaircaseOptions {
  double plateau_slope = 0.05;
  double plateau_width = 0.5;
  double rise_slope = 0.5;
};

/// Plateaus and rises of ln T along the axis from central differences.
inline StaircaseFeatures staircase_features(const std::vector<double>& x, const std::vector<double>& T,
                                           const StaircaseOptions& opt = {}) {
  StaircaseFeatures f;
  const std::size_t n = x.size();
  if (n < 3 || T.size() != n) return f;
  std::vector<double> lnT(n), s(n);
  for (std::size_t i = 0; i < n; ++i) lnT[i] = std::log(T[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? n - 1 : i + 1;
    s[i] = (lnT[b] - lnT[a]) / (x[b] - x[a]);
  }
  auto runs = [&](auto pred) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n;) {
      if (!pred(s[i]) || !std::isfinite(s[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < n && pred(s[j + 1]) && std::isfinite(s[j + 1])) ++j;
      out.emplace_back(i, j);
      i = j + 1;
    }
    return out;
  };
  for (auto [i, j] : runs([&](double v) { return std::abs(v) < opt.plateau_slope; })) {
    if (x[j] - x[i] < opt.plateau_width) continue;
    std::vector<double> lv(T.begin() + static_cast<long>(i), T.begin() + static_cast<long>(j) + 1);
    std::nth_element(lv.begin(), lv.begin() + static_cast<long>(lv.size() / 2), lv.end());
    double med = lv[lv.size() / 2];
    if (lv.size() % 2 == 0) {
      const double lo = *std::max_element(lv.begin(), lv.begin() + static_cast<long>(lv.size() / 2));
      med = 0.5 * (med + lo);
    }
    f.plateaus.push_back({x[i], x[j], med});
  }
  for (auto [i, j] : runs([&](double v) { return v > opt.rise_slope; })) {
    Rise r{x[i], x[j], j + 1 < n};
    f.rises.push_back(r);
    if (r.saturated) ++f.cycles;
  }
  for (std::size_t k = 1; k < f.rises.size(); ++k) f.onset_spacing.push_back(f.rises[k].onset - f.rises[k - 1].onset);
  return f;
}

}  // namespace kerrcat

#endif  // KERRCAT_LIFETIME_HPP
