#ifndef KERRCAT_LIOUVILLIAN_HPP
#define KERRCAT_LIOUVILLIAN_HPP

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "kerrcat/dissipation.hpp"
#include "kerrcat/fock.hpp"

namespace kerrcat {

struct MasterEquation {
  Operator H;
  DissipatorList terms;

  MasterEquation(Operator h, DissipatorList t) : H(std::move(h)), terms(std::move(t)) {
    for (const auto& d : terms) require_same_space(H.space, d.jump.space);
  }
  FockSpace space() const { return H.space; }
};

inline constexpr int kSuperoperatorGuard = 128;
inline constexpr int kDenseEigenGuard = 40;

/// Right-hand side of the master equation in matrix form.
inline Matrix apply_lindblad(const MasterEquation& me, const Matrix& rho) {
  Matrix out = cplx(0, -1) * (me.H.data * rho - rho * me.H.data);
  for (const auto& t : me.terms) {
    const Matrix& O = t.jump.data;
    const Matrix OdO = O.adjoint() * O;
    out += t.rate * (O * rho * O.adjoint() - 0.5 * (OdO * rho + rho * OdO));
  }
  return out;
}

/// Column-stacked vec: vec(A X B) = (B^T kron A) vec(X).
inline Matrix build_superoperator(const MasterEquation& me, int guard = kSuperoperatorGuard) {
  const int d = me.space().dim;
  if (d > guard)
    throw Error(ErrorKind::Resource, "superoperator for d = " + std::to_string(d) + " exceeds guard " +
                                         std::to_string(guard));
  const Matrix I = Matrix::Identity(d, d);
  const Matrix& H = me.H.data;
  Matrix L = cplx(0, -1) * (Matrix(Eigen::kroneckerProduct(I, H)) - Matrix(Eigen::kroneckerProduct(H.transpose(), I)));
  for (const auto& t : me.terms) {
    const Matrix& O = t.jump.data;
    const Matrix OdO = O.adjoint() * O;
    L += t.rate * (Matrix(Eigen::kroneckerProduct(O.conjugate(), O)) -
                   0.5 * (Matrix(Eigen::kroneckerProduct(I, OdO)) + Matrix(Eigen::kroneckerProduct(OdO.transpose(), I))));
  }
  return L;
}

inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }
inline Matrix unvec(const Vector& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

namespace detail {
/// +1 / -1 for operators that only connect even-to-even or flip parity; 0 otherwise.
inline int operator_parity(const Matrix& O) {
  bool even = false, odd = false;
  const double tol = 1e-14 * std::max(max_abs(O), 1e-300);
  for (Eigen::Index j = 0; j < O.cols(); ++j)
    for (Eigen::Index i = 0; i < O.rows(); ++i)
      if (std::abs(O(i, j)) > tol) ((i + j) % 2 == 0 ? even : odd) = true;
  if (even && odd) return 0;
  return odd ? -1 : 1;
}

inline bool parity_preserving(const MasterEquation& me) {
  if (operator_parity(me.H.data) != 1) return false;
  for (const auto& t : me.terms)
    if (operator_parity(t.jump.data) == 0) return false;
  return true;
}

/// Column-stacked indices i + j d with (i + j) of the given parity (0 even, 1 odd).
inline std::vector<int> sector_indices(int d, int parity_sum) {
  std::vector<int> idx;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if ((i + j) % 2 == parity_sum) idx.push_back(i + j * d);
  return idx;
}
}  // namespace detail

// ---------------------------------------------------------------------------

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Adaptive Dormand-Prince integration; states are returned at every entry of t_grid.
inline Trajectory evolve(const MasterEquation& me, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                         double abs_tol = 1e-10, double rel_tol = 1e-10) {
  require_same_space(me.space(), rho0.space);
  if (!rho0.valid(1e-8)) throw Error(ErrorKind::Domain, "initial density matrix is not valid");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] >= t_grid[i - 1])) throw Error(ErrorKind::Domain, "t_grid must be nondecreasing");
  const int d = me.space().dim;
  using state_t = std::vector<cplx>;
  namespace ode = boost::numeric::odeint;

  Trajectory tr;
  if (t_grid.empty()) return tr;
  state_t x(rho0.data.data(), rho0.data.data() + rho0.data.size());
  auto rhs = [&](const state_t& s, state_t& ds, double) {
    const Matrix r = Eigen::Map<const Matrix>(s.data(), d, d);
    const Matrix out = apply_lindblad(me, r);
    ds.assign(out.data(), out.data() + out.size());
  };
  auto observer = [&](const state_t& s, double t) {
    tr.times.push_back(t);
    tr.states.emplace_back(me.space(), Eigen::Map<const Matrix>(s.data(), d, d));
  };
  const double h_scale = std::max(max_abs(me.H.data), 1e-300);
  if (t_grid.size() == 1 || t_grid.front() == t_grid.back()) {
    for (double t : t_grid) observer(x, t);
  } else {
    const double dt0 = 1e-3 / h_scale;
    ode::integrate_times(ode::make_controlled(abs_tol, rel_tol, ode::runge_kutta_dopri5<state_t>()), rhs, x,
                         t_grid.begin(), t_grid.end(), dt0, observer);
  }
  for (size_t k = 0; k < tr.states.size(); ++k) {
    const Matrix& r = tr.states[k].data;
    const double allow = 1e-8 * std::max(1.0, h_scale * std::abs(tr.times[k] - t_grid.front()));
    if (std::abs(r.trace() - 1.0) > allow || max_abs(r - r.adjoint()) > allow)
      throw Error(ErrorKind::Integrator, "trace or Hermiticity drift beyond tolerance");
  }
  return tr;
}

// ---------------------------------------------------------------------------

struct SteadyAnalysis {
  DensityMatrix rho_ss;
  std::vector<double> P;  // descending eigenvalues of rho_ss
  double P_leak = 0.0;
  double residual = 0.0;  // max |L rho_ss|
  std::string method;
};

/// Kernel of L restricted to the population sector, normalized to unit trace.
inline SteadyAnalysis steady_state(const MasterEquation& me, int guard = kSuperoperatorGuard) {
  const int d = me.space().dim;
  const Matrix Lfull = build_superoperator(me, guard);
  std::vector<int> idx;
  if (detail::parity_preserving(me))
    idx = detail::sector_indices(d, 0);
  else
    for (int k = 0; k < d * d; ++k) idx.push_back(k);
  const Matrix L = Lfull(idx, idx);
  const auto n = static_cast<Eigen::Index>(idx.size());
  const double scale = std::max(max_abs(L), 1e-300);

  auto to_rho = [&](const Vector& x) {
    Vector full = Vector::Zero(d * d);
    for (Eigen::Index k = 0; k < n; ++k) full(idx[static_cast<size_t>(k)]) = x(k);
    Matrix r = unvec(full, d);
    r = 0.5 * (r + r.adjoint());
    return Matrix(r / r.trace());
  };
  auto residual = [&](const Matrix& r) { return max_abs(apply_lindblad(me, r)); };

  SteadyAnalysis sa;
  Matrix rho;
  {
    // Shifted inverse iteration toward the eigenvalue nearest zero.
    const Eigen::PartialPivLU<Matrix> lu(L - cplx(-1e-9 * scale, 0) * Matrix::Identity(n, n));
    Vector x = Vector::Ones(n);
    for (int it = 0; it < 8; ++it) x = lu.solve(x).normalized();
    rho = to_rho(x);
    sa.method = "inverse-iteration";
  }
  if (!std::isfinite(std::abs(rho.trace())) || residual(rho) > 1e-9 * scale) {
    // Replace one equation by the trace functional.
    Matrix A = L;
    Vector b = Vector::Zero(n);
    A.row(0).setZero();
    for (Eigen::Index k = 0; k < n; ++k) {
      const int full = idx[static_cast<size_t>(k)];
      if (full % d == full / d) A(0, k) = 1.0;
    }
    b(0) = 1.0;
    rho = to_rho(A.fullPivLu().solve(b));
    sa.method = "trace-constrained";
  }
  sa.residual = residual(rho);
  sa.rho_ss = DensityMatrix(me.space(), rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  for (Eigen::Index k = d - 1; k >= 0; --k) sa.P.push_back(es.eigenvalues()(k));
  sa.P_leak = 1.0 - sa.P[0] - (sa.P.size() > 1 ? sa.P[1] : 0.0);
  return sa;
}

/// Largest-real-part eigenvalue among coherence modes (odd under rho -> P rho P).
inline cplx slowest_coherence_rate(const MasterEquation& me, int guard = kDenseEigenGuard) {
  const int d = me.space().dim;
  if (d > guard)
    throw Error(ErrorKind::Resource, "dense Liouvillian eigensolve for d = " + std::to_string(d) + " exceeds guard " +
                                         std::to_string(guard));
  const Matrix Lfull = build_superoperator(me, kSuperoperatorGuard);
  const auto odd = detail::sector_indices(d, 1);
  cplx best(-std::numeric_limits<double>::infinity(), 0.0);
  if (detail::parity_preserving(me)) {
    Eigen::ComplexEigenSolver<Matrix> es(Lfull(odd, odd), false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      if (es.eigenvalues()(k).real() > best.real()) best = es.eigenvalues()(k);
    return best;
  }
  Eigen::ComplexEigenSolver<Matrix> es(Lfull, true);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Vector v = es.eigenvectors().col(k);
    double w = 0.0;
    for (int i : odd) w += std::norm(v(i));
    if (w / v.squaredNorm() > 0.5 && es.eigenvalues()(k).real() > best.real()) best = es.eigenvalues()(k);
  }
  if (!std::isfinite(best.real())) throw Error(ErrorKind::ModeIdentification, "no coherence mode found");
  return best;
}

}  // namespace kerrcat

#endif  // KERRCAT_LIOUVILLIAN_HPP
