#ifndef KERRCAT_DISSIPATION_HPP
#define KERRCAT_DISSIPATION_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kerrcat/circuit.hpp"
#include "kerrcat/fock.hpp"
#include "kerrcat/units.hpp"

namespace kerrcat {

/// Bath frequencies as multiples of omega_d.
enum class FreqLabel { Half, One, ThreeHalves, FiveHalves, SevenHalves };

inline constexpr FreqLabel kAllLabels[] = {FreqLabel::Half, FreqLabel::One, FreqLabel::ThreeHalves,
                                           FreqLabel::FiveHalves, FreqLabel::SevenHalves};

inline double multiple(FreqLabel l) {
  switch (l) {
    case FreqLabel::Half: return 0.5;
    case FreqLabel::One: return 1.0;
    case FreqLabel::ThreeHalves: return 1.5;
    case FreqLabel::FiveHalves: return 2.5;
    case FreqLabel::SevenHalves: return 3.5;
  }
  return 0.0;
}

inline std::string to_string(FreqLabel l) {
  switch (l) {
    case FreqLabel::Half: return "wd/2";
    case FreqLabel::One: return "wd";
    case FreqLabel::ThreeHalves: return "3wd/2";
    case FreqLabel::FiveHalves: return "5wd/2";
    case FreqLabel::SevenHalves: return "7wd/2";
  }
  return "?";
}

/// n(omega) = 1 / (exp(hbar omega / k_B T) - 1), omega in rad/us.
inline double bose_einstein(double omega, double T) {
  if (!(omega > 0) || !(T > 0)) throw Error(ErrorKind::Domain, "bose_einstein needs omega > 0 and T > 0");
  const double x = units::hbar * omega * 1e6 / (units::k_B * T);
  return 1.0 / std::expm1(x);
}

struct BathSpec {
  std::map<FreqLabel, double> kappa;        // 1/us
  std::map<FreqLabel, double> temperature;  // K
  std::map<FreqLabel, double> n_th;         // overrides the Bose-Einstein value
  double omega_d = 0.0;

  /// Same kappa and temperature at every label.
  static BathSpec flat(double kappa, double T, double omega_d) {
    BathSpec b;
    b.omega_d = omega_d;
    for (auto l : kAllLabels) {
      b.kappa[l] = kappa;
      b.temperature[l] = T;
    }
    return b;
  }

  /// Fixed occupation at every label (temperature unused).
  static BathSpec fixed_occupation(double kappa, double n, double omega_d = 1.0) {
    BathSpec b;
    b.omega_d = omega_d;
    for (auto l : kAllLabels) {
      b.kappa[l] = kappa;
      b.n_th[l] = n;
    }
    return b;
  }

  double kappa_at(FreqLabel l) const {
    auto it = kappa.find(l);
    if (it == kappa.end()) throw Error(ErrorKind::BathSpec, "no kappa for " + to_string(l));
    if (it->second < 0) throw Error(ErrorKind::BathSpec, "negative kappa at " + to_string(l));
    return it->second;
  }

  double occupation(FreqLabel l) const {
    if (auto it = n_th.find(l); it != n_th.end()) return it->second;
    auto it = temperature.find(l);
    if (it == temperature.end()) throw Error(ErrorKind::BathSpec, "no temperature for " + to_string(l));
    if (!(omega_d > 0)) throw Error(ErrorKind::BathSpec, "bath omega_d must be positive");
    return bose_einstein(multiple(l) * omega_d, it->second);
  }

  /// Absorption rate kappa n.
  double gamma(FreqLabel l) const { return kappa_at(l) * occupation(l); }
  /// Emission rate kappa (1 + n).
  double upsilon(FreqLabel l) const { return kappa_at(l) * (1.0 + occupation(l)); }
};

struct DissipatorTerm {
  double rate = 0.0;  // 1/us
  Operator jump;
  std::string label;
};

using DissipatorList = std::vector<DissipatorTerm>;

namespace detail {
inline void push(DissipatorList& out, double rate, Operator jump, std::string label) {
  if (rate < 0) throw Error(ErrorKind::Domain, "negative dissipator rate for " + label);
  if (rate == 0.0 || max_abs(jump.data) == 0.0) return;
  out.push_back({rate, std::move(jump), std::move(label)});
}

inline double require_omega_d(const EffectiveParams& p) {
  if (!(p.omega_d > 0)) throw Error(ErrorKind::Domain, "effective params carry no omega_d");
  return p.omega_d;
}
}  // namespace detail

/// Leading-order STS master equation. rwa_only keeps only single-photon loss and gain at omega_d/2.
inline DissipatorList sts_dissipators_o2(const EffectiveParams& p, const BathSpec& bath, FockSpace space,
                                         bool rwa_only = false) {
  const Ladder L = ladder_ops(space);
  DissipatorList out;
  const auto H = FreqLabel::Half, T3 = FreqLabel::ThreeHalves;
  if (rwa_only) {
    detail::push(out, bath.gamma(H), L.adag, "wd/2 gain");
    detail::push(out, bath.upsilon(H), L.a, "wd/2 loss");
    return out;
  }
  const double wd = detail::require_omega_d(p);
  const double g = 2.0 * p.G2 / wd;
  detail::push(out, bath.gamma(H), L.adag + g * L.a, "wd/2 gain");
  detail::push(out, bath.upsilon(H), L.a + g * L.adag, "wd/2 loss");
  const double f3 = std::pow(3.0 * p.G2 / wd, 2);
  detail::push(out, f3 * bath.gamma(T3), L.adag, "3wd/2 gain");
  detail::push(out, f3 * bath.upsilon(T3), L.a, "3wd/2 loss");
  return out;
}

/// Third- and fourth-order corrections on top of the leading-order set.
inline DissipatorList sts_dissipators_o34_extras(const EffectiveParams& p, const BathSpec& bath, FockSpace space) {
  const Ladder L = ladder_ops(space);
  const Operator &a = L.a, &ad = L.adag;
  const double wd = detail::require_omega_d(p), wd2 = wd * wd;
  DissipatorList out;

  const double c1 = 8.0 * p.G3 / wd;
  if (c1 != 0.0) {
    detail::push(out, bath.gamma(FreqLabel::One), c1 * (ad * ad), "wd two-photon gain");
    detail::push(out, bath.upsilon(FreqLabel::One), c1 * (a * a), "wd two-photon loss");
  }

  const double h1 = 3.0 * p.G2 * p.G2 / (2.0 * wd2) - 24.0 * p.G1 * p.G3 / wd2;
  const double h2 = 12.0 * p.G4 / wd, h3 = 4.0 * p.G4 / wd, h4 = 12.0 * p.G4 / wd;
  if (h1 != 0.0 || p.G4 != 0.0) {
    detail::push(out, bath.gamma(FreqLabel::Half), h1 * ad + h2 * a + h3 * (ad * ad * ad) + h4 * (ad * a * a),
                 "wd/2 composite gain");
    detail::push(out, bath.upsilon(FreqLabel::Half), h1 * a + h2 * ad + h3 * (a * a * a) + h4 * (ad * ad * a),
                 "wd/2 composite loss");
  }

  const double t1 = 18.0 * p.G4 / wd;
  const double t2 = -11.0 * p.G2 * p.G2 / wd2 + 12.0 * p.G1t * p.G3 / (5.0 * wd2);
  const double t3 = 12.0 * p.G4 / wd;
  if (t1 != 0.0 || t2 != 0.0) {
    detail::push(out, bath.gamma(FreqLabel::ThreeHalves), t1 * ad + t2 * a + t3 * (ad * ad * a),
                 "3wd/2 composite gain");
    detail::push(out, bath.upsilon(FreqLabel::ThreeHalves), t1 * a + t2 * ad + t3 * (ad * a * a),
                 "3wd/2 composite loss");
  }

  const double f1 = 5.0 * p.G2 * p.G2 / (3.0 * wd2) + 4.0 * p.G1t * p.G3 / (3.0 * wd2);
  const double f2 = 4.0 * p.G4 / (3.0 * wd);
  if (f1 != 0.0 || f2 != 0.0) {
    detail::push(out, bath.gamma(FreqLabel::FiveHalves), f1 * ad + f2 * (ad * ad * ad), "5wd/2 composite gain");
    detail::push(out, bath.upsilon(FreqLabel::FiveHalves), f1 * a + f2 * (a * a * a), "5wd/2 composite loss");
  }
  return out;
}

inline DissipatorList sts_dissipators_o34(const EffectiveParams& p, const BathSpec& bath, FockSpace space) {
  DissipatorList out = sts_dissipators_o2(p, bath, space);
  for (auto& t : sts_dissipators_o34_extras(p, bath, space)) out.push_back(std::move(t));
  return out;
}

inline DissipatorTerm dephasing_term(double gamma_phi, FockSpace space) {
  if (gamma_phi < 0) throw Error(ErrorKind::Domain, "dephasing rate must be >= 0");
  return {gamma_phi, ladder_ops(space).n, "dephasing"};
}

/// Effective parameters with the third-order modulation corrections G2', G4'.
inline EffectiveParams strong_modulation_params(const CircuitParams& c) {
  if (c.E_JDelta() != 0.0) throw Error(ErrorKind::Domain, "strong-modulation set assumes E_J1 == E_J3");
  EffectiveParams p = sts_effective_params(c);
  const double dp = c.delta_phi, wd = c.omega_d;
  const double phi2 = p.phi_zps * p.phi_zps;
  const double M2 = static_cast<double>(c.M) * c.M;
  p.G2p = dp * dp * dp * p.E_JSigma * phi2 / 16.0;
  p.G4p = phi2 / (12.0 * M2) * p.G2p;
  p.eps2 = p.G2 - p.G2p + 6.0 * p.G4 - 6.0 * p.G4p;
  p.Lambda = 4.0 * (p.G4 - p.G4p);
  const double g = p.G2 - p.G2p;
  p.Delta = p.eps_c - wd / 2.0 - 2.0 * p.K - 2.0 * g * g / wd + p.G2p * p.G2p / (9.0 * wd);
  return p;
}

/// Master equation for strong modulation. At 5wd/2, n multiplies D[a] and n + 1 multiplies D[a^dag].
inline DissipatorList strong_modulation_dissipators(const EffectiveParams& p, const BathSpec& bath, FockSpace space) {
  const Ladder L = ladder_ops(space);
  const double wd = detail::require_omega_d(p);
  const double g = p.G2 - p.G2p;
  DissipatorList out;
  detail::push(out, bath.gamma(FreqLabel::Half), L.adag + (2.0 * g / wd) * L.a, "wd/2 gain");
  detail::push(out, bath.upsilon(FreqLabel::Half), L.a + (2.0 * g / wd) * L.adag, "wd/2 loss");
  const double f3 = std::pow(3.0 * g / wd, 2);
  detail::push(out, f3 * bath.gamma(FreqLabel::ThreeHalves), L.adag, "3wd/2 gain");
  detail::push(out, f3 * bath.upsilon(FreqLabel::ThreeHalves), L.a, "3wd/2 loss");
  const double f5 = std::pow(5.0 * p.G2p / (8.0 * wd), 2);
  detail::push(out, f5 * bath.gamma(FreqLabel::FiveHalves), L.a, "5wd/2 n D[a]");
  detail::push(out, f5 * bath.upsilon(FreqLabel::FiveHalves), L.adag, "5wd/2 (n+1) D[a^dag]");
  const double f7 = std::pow(11.0 * p.G2p / (36.0 * wd), 2);
  detail::push(out, f7 * bath.gamma(FreqLabel::SevenHalves), L.adag, "7wd/2 gain");
  detail::push(out, f7 * bath.upsilon(FreqLabel::SevenHalves), L.a, "7wd/2 loss");
  return out;
}

inline std::pair<EffectiveParams, DissipatorList> strong_modulation_set(const CircuitParams& c, const BathSpec& bath,
                                                                        FockSpace space) {
  EffectiveParams p = strong_modulation_params(c);
  return {p, strong_modulation_dissipators(p, bath, space)};
}

/// Single-SQUID master equation; p from squid_effective_params.
inline DissipatorList squid_dissipators(const EffectiveParams& p, const BathSpec& bath, FockSpace space) {
  const Ladder L = ladder_ops(space);
  const double wd = detail::require_omega_d(p);
  const double dp = p.delta_phi;
  const double g = std::numbers::sqrt2 * p.G2 / wd;
  DissipatorList out;
  detail::push(out, bath.gamma(FreqLabel::Half), L.adag - g * L.a, "wd/2 gain");
  detail::push(out, bath.upsilon(FreqLabel::Half), L.a - g * L.adag, "wd/2 loss");
  const double c3 = std::numbers::sqrt2 * dp * p.E_JSigma * p.phi_zps * p.phi_zps / (4.0 * wd);
  detail::push(out, c3 * c3 * bath.gamma(FreqLabel::ThreeHalves), 3.0 * L.adag + dp * L.a, "3wd/2 gain");
  detail::push(out, c3 * c3 * bath.upsilon(FreqLabel::ThreeHalves), 3.0 * L.a + dp * L.adag, "3wd/2 loss");
  const double f5 = std::pow(dp * std::numbers::sqrt2 * p.G2 / (3.0 * wd), 2);
  detail::push(out, f5 * bath.gamma(FreqLabel::FiveHalves), L.adag, "5wd/2 gain");
  detail::push(out, f5 * bath.upsilon(FreqLabel::FiveHalves), L.a, "5wd/2 loss");
  return out;
}

enum class DissipatorSet { O2Rwa, O2, O34, StrongMod, Squid };

inline std::string to_string(DissipatorSet s) {
  switch (s) {
    case DissipatorSet::O2Rwa: return "o2-rwa";
    case DissipatorSet::O2: return "o2";
    case DissipatorSet::O34: return "o34";
    case DissipatorSet::StrongMod: return "strong-mod";
    case DissipatorSet::Squid: return "squid";
  }
  return "?";
}

inline std::optional<DissipatorSet> dissipator_set_from_string(const std::string& s) {
  for (auto v : {DissipatorSet::O2Rwa, DissipatorSet::O2, DissipatorSet::O34, DissipatorSet::StrongMod,
                 DissipatorSet::Squid})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

/// Dissipators of the chosen set. StrongMod expects p from strong_modulation_params,
/// Squid expects p from squid_effective_params.
inline DissipatorList build_dissipators(DissipatorSet set, const EffectiveParams& p, const BathSpec& bath,
                                        FockSpace space) {
  switch (set) {
    case DissipatorSet::O2Rwa: return sts_dissipators_o2(p, bath, space, true);
    case DissipatorSet::O2: return sts_dissipators_o2(p, bath, space, false);
    case DissipatorSet::O34: return sts_dissipators_o34(p, bath, space);
    case DissipatorSet::StrongMod: return strong_modulation_dissipators(p, bath, space);
    case DissipatorSet::Squid: return squid_dissipators(p, bath, space);
  }
  return {};
}

}  // namespace kerrcat

#endif  // KERRCAT_DISSIPATION_HPP
