#ifndef KERRCAT_HAMILTONIAN_HPP
#define KERRCAT_HAMILTONIAN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "kerrcat/circuit.hpp"
#include "kerrcat/fock.hpp"

namespace kerrcat {

enum class HamiltonianKind { DKC, RKC, STS_EFFECTIVE, SQUID_EFFECTIVE, LAB_FRAME };

struct HamiltonianSpec {
  HamiltonianKind kind = HamiltonianKind::DKC;
  EffectiveParams params;  // static kinds
  CircuitParams circuit;   // LAB_FRAME
  FockSpace space{40};
  bool exact_drive = false;
  bool asymmetric_drive = true;  // LAB_FRAME: include the E_JDelta term when E_J1 != E_J3
};

namespace detail {
inline void check_hermitian(const Operator& H) {
  if (!is_hermitian(H, 1e-12)) throw Error(ErrorKind::InternalConsistency, "Hamiltonian is not Hermitian");
}
}  // namespace detail

/// Static rotating-frame Hamiltonian of the requested kind.
inline Operator build_static(const HamiltonianSpec& spec) {
  const auto& p = spec.params;
  const auto [a, ad, n] = ladder_ops(spec.space);
  const Operator a2 = a * a, ad2 = ad * ad;
  Operator H = Operator::zero(spec.space);
  switch (spec.kind) {
    case HamiltonianKind::RKC:
      H = p.eps2 * (ad2 + a2) - p.K * (ad2 * a2);
      break;
    case HamiltonianKind::DKC:
      H = p.Delta * n + p.eps2 * (ad2 + a2) - p.K * (ad2 * a2);
      break;
    case HamiltonianKind::STS_EFFECTIVE:
      H = p.Delta * n + p.eps2 * (ad2 + a2) - p.K * (ad2 * a2) + p.Lambda * (ad * a2 * a + ad2 * ad * a);
      break;
    case HamiltonianKind::SQUID_EFFECTIVE:
      H = p.Delta * n + p.eps2 * (ad2 + a2) - p.K * (ad2 * a2) + p.Lambda * (ad2 * ad * a + ad * a2 * a) +
          p.Theta * (ad2 * ad2 + a2 * a2);
      break;
    case HamiltonianKind::LAB_FRAME:
      throw Error(ErrorKind::Domain, "build_static called with LAB_FRAME; use build_lab_frame");
  }
  detail::check_hermitian(H);
  return H;
}

enum class Frame { Lab, Rotating };

/// Lab-frame STS Hamiltonian at time t (us). In the rotating frame at omega_d/2 the
/// ladder operators pick up e^{-i omega_d t/2} and (omega_d/2) n is subtracted.
inline Operator build_lab_frame(const HamiltonianSpec& spec, double t, Frame frame = Frame::Lab) {
  if (spec.kind != HamiltonianKind::LAB_FRAME) throw Error(ErrorKind::Domain, "build_lab_frame needs LAB_FRAME spec");
  const CircuitParams& c = spec.circuit;
  const EffectiveParams p = sts_effective_params(c);
  const double wd = c.omega_d;

  const Ladder L = ladder_ops(spec.space);
  Operator a = L.a, ad = L.adag;
  if (frame == Frame::Rotating) {
    const cplx ph = std::polar(1.0, -0.5 * wd * t);
    a = ph * a;
    ad = std::conj(ph) * ad;
  }
  // a^dag^2 a^2 is rotation invariant; -2K n is the normal-ordering part of the quartic.
  const Operator& nn = L.n;
  Operator H = (p.eps_c - 2.0 * p.K) * nn - p.K * (L.adag * L.adag * L.a * L.a);
  if (frame == Frame::Rotating) H -= (0.5 * wd) * nn;

  const double cs = std::cos(wd * t);
  const double s = spec.exact_drive ? std::sin(c.delta_phi * cs) : c.delta_phi * cs;
  const Operator phi_op = p.phi_zps * (a + ad);
  const Operator phi2 = phi_op * phi_op;
  const double M2 = static_cast<double>(c.M) * c.M;
  // sum_{n=1,2} (-1)^n/(2n)! phi^{2n} / M^{2n-2}
  const Operator series = (-0.5) * phi2 + (1.0 / (24.0 * M2)) * (phi2 * phi2);
  if (s != 0.0) H -= (2.0 * p.E_JSigma * s) * series;

  if (spec.asymmetric_drive && p.E_JDelta != 0.0) {
    const double cc = std::cos(c.delta_phi * cs);
    H -= (2.0 * p.E_JDelta * cc) * (phi_op - (1.0 / (6.0 * M2)) * (phi2 * phi_op));
  }
  H.data = 0.5 * (H.data + H.data.adjoint());
  return H;
}

enum class ExtremumKind { Well, Saddle, Minimum };

struct Extremum {
  double x = 0, p = 0, E = 0;
  ExtremumKind kind = ExtremumKind::Well;
};

struct ClassicalSurface {
  std::vector<double> x, p;
  Eigen::MatrixXd E;  // E(i, j) at p[i], x[j]
  std::vector<Extremum> extrema;
};

namespace detail {
struct SurfaceCoeffs {
  double Delta, eps2, K, Lambda, Theta;
};

inline double e_cl(const SurfaceCoeffs& c, double x, double p) {
  const double r2 = x * x + p * p, d = x * x - p * p;
  return c.Delta * r2 + 2.0 * c.eps2 * d - c.K * r2 * r2 + 2.0 * c.Lambda * r2 * d +
         2.0 * c.Theta * (x * x * x * x - 6.0 * x * x * p * p + p * p * p * p);
}

inline std::array<double, 2> e_cl_grad(const SurfaceCoeffs& c, double x, double p) {
  const double r2 = x * x + p * p, d = x * x - p * p;
  const double gx = 2.0 * c.Delta * x + 4.0 * c.eps2 * x - 4.0 * c.K * r2 * x +
                    2.0 * c.Lambda * (2.0 * x * d + 2.0 * x * r2) + 2.0 * c.Theta * (4.0 * x * x * x - 12.0 * x * p * p);
  const double gp = 2.0 * c.Delta * p - 4.0 * c.eps2 * p - 4.0 * c.K * r2 * p +
                    2.0 * c.Lambda * (2.0 * p * d - 2.0 * p * r2) + 2.0 * c.Theta * (4.0 * p * p * p - 12.0 * x * x * p);
  return {gx, gp};
}

inline std::array<double, 3> e_cl_hess(const SurfaceCoeffs& c, double x, double p) {
  const double h = 1e-6 * std::max(1.0, std::hypot(x, p));
  const auto gxp = e_cl_grad(c, x + h, p), gxm = e_cl_grad(c, x - h, p);
  const auto gpp = e_cl_grad(c, x, p + h), gpm = e_cl_grad(c, x, p - h);
  return {(gxp[0] - gxm[0]) / (2 * h), 0.5 * ((gxp[1] - gxm[1]) + (gpp[0] - gpm[0])) / (2 * h),
          (gpp[1] - gpm[1]) / (2 * h)};
}
}  // namespace detail

/// Classical energy with a -> x + i p. The surface is bounded above, so wells are maxima.
inline ClassicalSurface classical_surface(const EffectiveParams& prm, const std::vector<double>& xs,
                                          const std::vector<double>& ps) {
  const detail::SurfaceCoeffs c{prm.Delta, prm.eps2, prm.K, prm.Lambda, prm.Theta};
  ClassicalSurface s;
  s.x = xs;
  s.p = ps;
  s.E.resize(static_cast<Eigen::Index>(ps.size()), static_cast<Eigen::Index>(xs.size()));
  for (size_t i = 0; i < ps.size(); ++i)
    for (size_t j = 0; j < xs.size(); ++j)
      s.E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = detail::e_cl(c, xs[j], ps[i]);

  // Newton from every grid point whose gradient is small relative to its neighbours.
  const double scale = std::max({std::abs(c.Delta), std::abs(c.eps2), std::abs(c.K), 1e-300});
  const double span = std::max(xs.empty() ? 1.0 : xs.back() - xs.front(), ps.empty() ? 1.0 : ps.back() - ps.front());
  const double merge_tol = 1e-6 * span;
  for (size_t i = 1; i + 1 < ps.size(); ++i) {
    for (size_t j = 1; j + 1 < xs.size(); ++j) {
      const auto g = detail::e_cl_grad(c, xs[j], ps[i]);
      const double gn = std::hypot(g[0], g[1]);
      bool local_min_grad = true;
      for (int di = -1; di <= 1 && local_min_grad; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto gg = detail::e_cl_grad(c, xs[j + dj], ps[i + di]);
          if (std::hypot(gg[0], gg[1]) < gn) {
            local_min_grad = false;
            break;
          }
        }
      if (!local_min_grad) continue;
      double x = xs[j], p = ps[i];
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const auto gr = detail::e_cl_grad(c, x, p);
        const auto hs = detail::e_cl_hess(c, x, p);
        const double det = hs[0] * hs[2] - hs[1] * hs[1];
        if (std::abs(det) < 1e-300) break;
        const double dx = (hs[2] * gr[0] - hs[1] * gr[1]) / det;
        const double dpp = (hs[0] * gr[1] - hs[1] * gr[0]) / det;
        x -= dx;
        p -= dpp;
        if (std::hypot(dx, dpp) < 1e-13 * std::max(1.0, std::hypot(x, p))) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      if (x < xs.front() || x > xs.back() || p < ps.front() || p > ps.back()) continue;
      const auto gr = detail::e_cl_grad(c, x, p);
      if (std::hypot(gr[0], gr[1]) > 1e-8 * scale * std::max(1.0, std::hypot(x, p))) continue;
      bool dup = false;
      for (const auto& e : s.extrema)
        if (std::hypot(e.x - x, e.p - p) < merge_tol) dup = true;
      if (dup) continue;
      const auto hs = detail::e_cl_hess(c, x, p);
      const double det = hs[0] * hs[2] - hs[1] * hs[1];
      const double tr = hs[0] + hs[2];
      const double tol = 1e-9 * scale;
      Extremum e{x, p, detail::e_cl(c, x, p), ExtremumKind::Saddle};
      if (det > tol * tol && tr < 0)
        e.kind = ExtremumKind::Well;
      else if (det > tol * tol && tr > 0)
        e.kind = ExtremumKind::Minimum;
      else if (det >= -tol * tol)
        continue;  // degenerate critical point
      s.extrema.push_back(e);
    }
  }
  std::sort(s.extrema.begin(), s.extrema.end(), [](const Extremum& a, const Extremum& b) {
    return a.x != b.x ? a.x < b.x : a.p < b.p;
  });
  return s;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

}  // namespace kerrcat

#endif  // KERRCAT_HAMILTONIAN_HPP
