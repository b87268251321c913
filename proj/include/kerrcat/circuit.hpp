#ifndef KERRCAT_CIRCUIT_HPP
#define KERRCAT_CIRCUIT_HPP

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "kerrcat/error.hpp"
#include "kerrcat/units.hpp"

namespace kerrcat {

enum class Topology { STS, SQUID };

inline std::string to_string(Topology t) { return t == Topology::STS ? "sts" : "squid"; }

/// Physical circuit. Energies are per-junction E/h in MHz; omega_d is angular (rad/us).
struct CircuitParams {
  double E_J1 = 80e3;
  double E_J2 = 80e3;
  double E_J3 = 80e3;
  double E_C = 250.0;
  double delta_phi = 0.0;
  double omega_d = units::from_ghz(12.0);
  int M = 1;
  int N = 1;
  Topology topology = Topology::STS;

  double E_JSigma() const { return 0.5 * (E_J1 + E_J3); }
  double E_JDelta() const { return 0.5 * (E_J1 - E_J3); }
};

/// Static effective Hamiltonian coefficients, angular units (rad/us).
struct EffectiveParams {
  double Delta = 0.0;
  double eps2 = 0.0;
  double K = 0.0;
  double Lambda = 0.0;
  double Theta = 0.0;
  double eps_c = 0.0;
  double phi_zps = 0.0;
  double G1 = 0.0;
  double G1t = 0.0;
  double G2 = 0.0;
  double G3 = 0.0;
  double G4 = 0.0;
  double delta_ext = 0.0;
  // Carried along for the dissipator builders.
  double omega_d = 0.0;
  double delta_phi = 0.0;
  double E_JSigma = 0.0;  // effective drive-branch energy, rad/us
  double E_JDelta = 0.0;
  double G2p = 0.0;  // strong-modulation corrections, zero otherwise
  double G4p = 0.0;

  /// Plain Kerr-cat parameters given in units of K.
  static EffectiveParams kerr_units(double K, double eps2_over_K, double Delta_over_K = 0.0,
                                    double Lambda_over_K = 0.0) {
    EffectiveParams p;
    p.K = K;
    p.eps2 = eps2_over_K * K;
    p.Delta = Delta_over_K * K;
    p.Lambda = Lambda_over_K * K;
    return p;
  }
};

namespace detail {
inline void check_common(const CircuitParams& c) {
  if (!(c.E_J1 > 0 && c.E_J2 > 0 && c.E_J3 > 0 && c.E_C > 0))
    throw Error(ErrorKind::Domain, "junction and charging energies must be positive");
  if (!(c.delta_phi >= 0 && c.delta_phi < std::numbers::pi / 2))
    throw Error(ErrorKind::Domain, "delta_phi must lie in [0, pi/2)");
  if (!(c.omega_d > 0)) throw Error(ErrorKind::Domain, "omega_d must be positive");
  if (c.M < 1 || c.N < c.M) throw Error(ErrorKind::Topology, "need M >= 1 and N >= M");
  if (c.N % c.M != 0) throw Error(ErrorKind::Topology, "N must be divisible by M");
}
}  // namespace detail

/// STS static effective parameters with Kerr dilution applied through (M, N).
inline EffectiveParams sts_effective_params(const CircuitParams& c) {
  if (c.topology != Topology::STS) throw Error(ErrorKind::Topology, "sts_effective_params needs an STS circuit");
  detail::check_common(c);
  if (c.E_C >= c.E_J2) throw Error(ErrorKind::NotATransmon, "E_C must be smaller than E_J2");

  const double Ec = units::from_mhz(c.E_C);
  const double EJ2 = units::from_mhz(c.E_J2) / c.N;
  const double EJS = units::from_mhz(c.E_JSigma()) / c.M;
  const double EJD = units::from_mhz(c.E_JDelta()) / c.M;
  const double M2 = static_cast<double>(c.M) * c.M;
  const double dp = c.delta_phi, wd = c.omega_d;

  EffectiveParams p;
  p.phi_zps = std::pow(2.0 * Ec / EJ2, 0.25);
  const double phi = p.phi_zps, phi2 = phi * phi;
  p.eps_c = std::sqrt(8.0 * Ec * EJ2);
  p.K = Ec / (2.0 * static_cast<double>(c.N) * c.N);
  p.G2 = dp * EJS * phi2 / 2.0;
  p.G4 = -dp * EJS * phi2 * phi2 / (24.0 * M2);
  p.G1 = -2.0 * EJD * phi * (1.0 - dp * dp / 4.0);
  p.G1t = EJD * phi * dp * dp / 4.0;
  p.G3 = EJD * phi2 * phi / (3.0 * M2);
  p.eps2 = p.G2 + 6.0 * p.G4;
  p.Lambda = 4.0 * p.G4;
  p.omega_d = wd;
  p.delta_phi = dp;
  p.E_JSigma = EJS;
  p.E_JDelta = EJD;
  p.Delta = p.eps_c - wd / 2.0 - 2.0 * p.K - 2.0 * p.G2 * p.G2 / wd - 24.0 * p.G1 * p.G3 / wd;
  return p;
}

/// Applies the array dilution laws to single-junction (M = N = 1) parameters.
inline EffectiveParams dilution_scaling(const EffectiveParams& base, int M, int N) {
  if (M < 1 || N < 1) throw Error(ErrorKind::Topology, "M and N must be >= 1");
  const double m = M, n = N;
  const double n14 = std::pow(n, 0.25);
  EffectiveParams p = base;
  p.K = base.K / (n * n);
  p.G2 = base.G2 * std::sqrt(n) / m;
  p.G4 = base.G4 * n / (m * m * m);
  p.G1 = base.G1 * n14 / m;
  p.G1t = base.G1t * n14 / m;
  p.G3 = base.G3 * n14 * n14 * n14 / (m * m * m);
  p.phi_zps = base.phi_zps * n14;
  p.eps_c = base.eps_c / std::sqrt(n);
  p.E_JSigma = base.E_JSigma / m;
  p.E_JDelta = base.E_JDelta / m;
  p.eps2 = p.G2 + 6.0 * p.G4;
  p.Lambda = 4.0 * p.G4;
  if (p.omega_d > 0)
    p.Delta = p.eps_c - p.omega_d / 2.0 - 2.0 * p.K - 2.0 * p.G2 * p.G2 / p.omega_d -
              24.0 * p.G1 * p.G3 / p.omega_d + p.delta_ext;
  return p;
}

/// Single SQUID biased at pi/4. E_J1 and E_J3 are the SQUID junctions; E_J2 is unused.
inline EffectiveParams squid_effective_params(const CircuitParams& c) {
  if (c.topology != Topology::SQUID) throw Error(ErrorKind::Topology, "squid_effective_params needs a SQUID circuit");
  detail::check_common(c);
  if (c.M != 1 || c.N != 1) throw Error(ErrorKind::Topology, "SQUID circuits have M = N = 1");
  if (c.E_C >= c.E_JSigma()) throw Error(ErrorKind::NotATransmon, "E_C must be smaller than E_JSigma");

  const double Ec = units::from_mhz(c.E_C);
  const double EJ = units::from_mhz(c.E_JSigma());
  const double dp = c.delta_phi, wd = c.omega_d;
  const double s2 = std::numbers::sqrt2;

  EffectiveParams p;
  p.phi_zps = std::pow(2.0 * Ec / EJ, 0.25);
  const double phi2 = p.phi_zps * p.phi_zps, phi4 = phi2 * phi2;
  p.K = Ec / 2.0;
  p.eps_c = std::sqrt(8.0 * Ec * s2 * EJ);
  p.G2 = dp * EJ * phi2 / 2.0;
  p.eps2 = -(dp / (2.0 * s2)) * (std::sqrt(2.0 * Ec * EJ) - Ec) + dp * dp * dp * Ec * EJ / (4.0 * wd);
  p.Lambda = s2 * dp * EJ * phi4 / 12.0;
  p.Theta = s2 * dp * dp * EJ * phi4 / 192.0;
  p.omega_d = wd;
  p.delta_phi = dp;
  p.E_JSigma = EJ;
  p.E_JDelta = units::from_mhz(c.E_JDelta());
  p.Delta = p.eps_c - wd / 2.0 - 2.0 * p.K - (2.0 * p.G2 * p.G2 / wd) * (1.0 - dp * dp / 12.0);
  return p;
}

inline EffectiveParams effective_params(const CircuitParams& c) {
  return c.topology == Topology::STS ? sts_effective_params(c) : squid_effective_params(c);
}

/// Modulation depth giving |eps2|/K = target (sign ignored so the SQUID's negative eps2 works).
inline double delta_phi_for_eps2(const CircuitParams& c, double eps2_over_K, double dp_max = 1.5) {
  if (eps2_over_K < 0) throw Error(ErrorKind::Domain, "target eps2/K must be >= 0");
  if (eps2_over_K == 0) return 0.0;
  auto f = [&](double dp) {
    CircuitParams q = c;
    q.delta_phi = dp;
    const EffectiveParams p = effective_params(q);
    return std::abs(p.eps2) / p.K - eps2_over_K;
  };
  const double f_hi = f(dp_max);
  if (f_hi < 0) throw Error(ErrorKind::Domain, "eps2/K target out of reach for delta_phi <= " + std::to_string(dp_max));
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 0.0, dp_max, -eps2_over_K, f_hi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

/// Drive frequency that makes the bare detuning vanish: omega_d = 2(eps_c - 2K).
inline double resonant_omega_d(const CircuitParams& c) {
  CircuitParams probe = c;
  probe.delta_phi = 0.0;
  const EffectiveParams p = effective_params(probe);
  return 2.0 * (p.eps_c - 2.0 * p.K);
}

/// The drive-dependent (Stark) part of Delta.
inline double stark_shift(const EffectiveParams& p) {
  if (p.omega_d <= 0) return 0.0;
  return -2.0 * p.G2 * p.G2 / p.omega_d - 24.0 * p.G1 * p.G3 / p.omega_d;
}

struct DriveHarmonics {
  std::vector<double> amplitudes;  // 2 (-1)^n J_{2n+1}(delta_phi), n = 0..n_max
  double squeeze_factor = 1.0;     // 1 - dp^2/8 + dp^4/192
};

inline DriveHarmonics drive_harmonics(double delta_phi, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::Domain, "n_max must be >= 0");
  DriveHarmonics h;
  for (int n = 0; n <= n_max; ++n) {
    const double j = delta_phi == 0.0 ? 0.0 : std::cyl_bessel_j(2.0 * n + 1.0, delta_phi);
    h.amplitudes.push_back(2.0 * ((n % 2 == 0) ? 1.0 : -1.0) * j);
  }
  const double d2 = delta_phi * delta_phi;
  h.squeeze_factor = 1.0 - d2 / 8.0 + d2 * d2 / 192.0;
  return h;
}

struct ValidityReport {
  double phi_zps = 0.0;  // single junction of the transmon branch
  double delta_phi = 0.0;
  double sixth_order_ratio = 0.0;
  double squeeze_second = 0.0;  // dp^2/8
  double squeeze_fourth = 0.0;  // dp^4/192
  bool sixth_order_ok = true;
  bool squeeze_second_ok = true;
  bool squeeze_fourth_ok = true;
  bool pass() const { return sixth_order_ok && squeeze_second_ok && squeeze_fourth_ok; }
};

inline constexpr double kValidityThreshold = 0.1;

inline ValidityReport validity_report(const CircuitParams& c, double cat_n) {
  ValidityReport r;
  const double EJ2 = c.topology == Topology::STS ? c.E_J2 : c.E_JSigma();
  const double ratio = EJ2 > 0 ? c.E_C / EJ2 : 0.0;
  r.phi_zps = std::pow(2.0 * ratio, 0.25);
  r.delta_phi = c.delta_phi;
  r.sixth_order_ratio = (cat_n / 9.0) * std::sqrt(2.0 * ratio);
  const double d2 = c.delta_phi * c.delta_phi;
  r.squeeze_second = d2 / 8.0;
  r.squeeze_fourth = d2 * d2 / 192.0;
  r.sixth_order_ok = r.sixth_order_ratio < kValidityThreshold;
  r.squeeze_second_ok = r.squeeze_second < kValidityThreshold;
  r.squeeze_fourth_ok = r.squeeze_fourth < kValidityThreshold;
  return r;
}

/// Drive-dependent detuning that cancels the Lambda term to leading order: -2 Lambda eps2 / K.
inline double compensation_detuning(const EffectiveParams& p) {
  if (p.K == 0.0) throw Error(ErrorKind::Domain, "compensation detuning needs K != 0");
  return -2.0 * p.Lambda * p.eps2 / p.K;
}

/// How Delta is set when the drive strength is swept.
enum class DetuningMode {
  Target,    // Delta = target * K + delta_ext; the drive frequency is treated as calibrated
  Tracking,  // Target plus the drive-dependent Stark shift
  Formula    // Delta from the closed form with the configured omega_d
};

struct DetuningSpec {
  DetuningMode mode = DetuningMode::Target;
  double target_over_K = 0.0;
  double delta_ext = 0.0;  // rad/us
  bool compensate = false;  // add -2 Lambda eps2 / K
};

inline void apply_detuning(EffectiveParams& p, const DetuningSpec& d) {
  switch (d.mode) {
    case DetuningMode::Target:
      p.Delta = d.target_over_K * p.K;
      break;
    case DetuningMode::Tracking:
      p.Delta = d.target_over_K * p.K + stark_shift(p);
      break;
    case DetuningMode::Formula:
      break;
  }
  p.delta_ext = d.delta_ext + (d.compensate ? compensation_detuning(p) : 0.0);
  p.Delta += p.delta_ext;
}

}  // namespace kerrcat

#endif  // KERRCAT_CIRCUIT_HPP
