#ifndef KERRCAT_FOCK_HPP
#define KERRCAT_FOCK_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "kerrcat/error.hpp"

namespace kerrcat {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated single-mode Fock space {|0>, ..., |dim-1>}.
struct FockSpace {
  int dim = 2;

  FockSpace() = default;
  explicit FockSpace(int d) : dim(d) {
    if (d < 2) throw Error(ErrorKind::InvalidSpace, "dimension must be >= 2, got " + std::to_string(d));
  }
  friend bool operator==(const FockSpace&, const FockSpace&) = default;
};

inline void require_same_space(const FockSpace& a, const FockSpace& b) {
  if (!(a == b))
    throw Error(ErrorKind::InvalidSpace,
                "mismatched spaces: dim " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
}

struct Operator {
  FockSpace space;
  Matrix data;

  Operator() = default;
  Operator(FockSpace s, Matrix m) : space(s), data(std::move(m)) {
    if (data.rows() != s.dim || data.cols() != s.dim)
      throw Error(ErrorKind::InvalidSpace, "operator shape does not match space");
  }
  static Operator zero(FockSpace s) { return {s, Matrix::Zero(s.dim, s.dim)}; }
  static Operator identity(FockSpace s) { return {s, Matrix::Identity(s.dim, s.dim)}; }

  Operator adjoint() const { return {space, data.adjoint()}; }

  Operator& operator+=(const Operator& o) {
    require_same_space(space, o.space);
    data += o.data;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    require_same_space(space, o.space);
    data -= o.data;
    return *this;
  }
  Operator& operator*=(cplx c) {
    data *= c;
    return *this;
  }
};

inline Operator operator+(Operator a, const Operator& b) { return a += b; }
inline Operator operator-(Operator a, const Operator& b) { return a -= b; }
inline Operator operator*(cplx c, Operator a) { return a *= c; }
inline Operator operator*(double c, Operator a) { return a *= cplx(c, 0.0); }
inline Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space);
  return {a.space, a.data * b.data};
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Max-norm Hermiticity check relative to the largest entry.
inline bool is_hermitian(const Operator& A, double rel_tol = 1e-12) {
  const double scale = max_abs(A.data);
  return max_abs(A.data - A.data.adjoint()) <= rel_tol * (scale > 0 ? scale : 1.0);
}

inline Operator power(const Operator& A, int k) {
  Operator r = Operator::identity(A.space);
  for (int i = 0; i < k; ++i) r = r * A;
  return r;
}

inline Operator commutator(const Operator& A, const Operator& B) { return A * B - B * A; }

struct StateVector {
  FockSpace space;
  Vector amp;

  StateVector() = default;
  StateVector(FockSpace s, Vector v) : space(s), amp(std::move(v)) {
    if (amp.size() != s.dim) throw Error(ErrorKind::InvalidSpace, "state length does not match space");
  }
  static StateVector fock(FockSpace s, int n) {
    if (n < 0 || n >= s.dim) throw Error(ErrorKind::InvalidSpace, "Fock index out of range");
    Vector v = Vector::Zero(s.dim);
    v(n) = 1.0;
    return {s, v};
  }
  double norm() const { return amp.norm(); }
};

inline cplx expect(const Operator& A, const StateVector& psi) {
  require_same_space(A.space, psi.space);
  return psi.amp.dot(A.data * psi.amp);
}
inline cplx inner(const StateVector& a, const StateVector& b) {
  require_same_space(a.space, b.space);
  return a.amp.dot(b.amp);
}

struct DensityMatrix {
  FockSpace space;
  Matrix data;

  DensityMatrix() = default;
  DensityMatrix(FockSpace s, Matrix m) : space(s), data(std::move(m)) {
    if (data.rows() != s.dim || data.cols() != s.dim)
      throw Error(ErrorKind::InvalidSpace, "density matrix shape does not match space");
  }
  static DensityMatrix pure(const StateVector& psi) {
    return {psi.space, psi.amp * psi.amp.adjoint()};
  }
  cplx trace() const { return data.trace(); }

  /// Checks Hermiticity, unit trace and positivity at the stated tolerances.
  bool valid(double tol = 1e-9) const {
    if (max_abs(data - data.adjoint()) > tol) return false;
    if (std::abs(data.trace() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (data + data.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }
};

inline cplx expect(const Operator& A, const DensityMatrix& rho) {
  require_same_space(A.space, rho.space);
  return (A.data * rho.data).trace();
}

struct Ladder {
  Operator a;
  Operator adag;
  Operator n;
};

/// Annihilation, creation and number operators with a[n-1,n] = sqrt(n).
inline Ladder ladder_ops(FockSpace space) {
  if (space.dim < 2) throw Error(ErrorKind::InvalidSpace, "dimension must be >= 2");
  Matrix a = Matrix::Zero(space.dim, space.dim);
  for (int n = 1; n < space.dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Operator A{space, a};
  Operator Ad = A.adjoint();
  return {A, Ad, Ad * A};
}

inline Operator parity_operator(FockSpace space) {
  Matrix p = Matrix::Zero(space.dim, space.dim);
  for (int n = 0; n < space.dim; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return {space, p};
}

/// Population in the top 10% of Fock levels (at least one level).
inline double tail_population(const Vector& v) {
  const int d = static_cast<int>(v.size());
  const int k = std::max(1, d / 10);
  return v.tail(k).squaredNorm() / std::max(v.squaredNorm(), 1e-300);
}
inline double tail_population(const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const int k = std::max(1, d / 10);
  double s = 0;
  for (int i = d - k; i < d; ++i) s += std::real(rho(i, i));
  return s / std::max(std::abs(rho.trace()), 1e-300);
}

inline constexpr double kAdequacyThreshold = 1e-8;

inline bool adequate(const StateVector& psi, double threshold = kAdequacyThreshold) {
  return tail_population(psi.amp) < threshold;
}

namespace detail {
inline Vector coherent_amplitudes(cplx alpha, int dim) {
  Vector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}
inline void check_truncation(cplx alpha, FockSpace space) {
  const double n = std::norm(alpha);
  if (n > space.dim / 4.0) {
    const int suggested = static_cast<int>(std::ceil(4.0 * n)) + 1;
    throw Error(ErrorKind::TruncationRisk, "|alpha|^2 = " + std::to_string(n) + " exceeds dim/4; use dim >= " +
                                               std::to_string(suggested));
  }
}
}  // namespace detail

inline StateVector coherent_state(cplx alpha, FockSpace space) {
  detail::check_truncation(alpha, space);
  Vector c = detail::coherent_amplitudes(alpha, space.dim);
  c.normalize();
  return {space, c};
}

/// Even (parity = +1) or odd (parity = -1) cat state (|a> +/- |-a>)/norm.
inline StateVector cat_state(cplx alpha, int parity, FockSpace space) {
  if (parity != 1 && parity != -1) throw Error(ErrorKind::Domain, "parity must be +1 or -1");
  detail::check_truncation(alpha, space);
  if (parity == -1 && std::abs(alpha) < 1e-12)
    throw Error(ErrorKind::DegenerateCat, "odd cat with alpha = 0 is the zero vector");
  // Build from the parity-projected amplitudes directly: avoids cancellation at small alpha.
  Vector c = detail::coherent_amplitudes(alpha, space.dim);
  for (int n = 0; n < space.dim; ++n)
    if ((n % 2 == 0) != (parity == 1)) c(n) = 0.0;
  c.normalize();
  return {space, c};
}

/// Rectangular phase-space grid; beta = x + i p.
struct PhaseGrid {
  std::vector<double> x;
  std::vector<double> p;

  static PhaseGrid square(double extent, int points) {
    PhaseGrid g;
    for (int i = 0; i < points; ++i) {
      const double v = -extent + 2.0 * extent * i / (points - 1);
      g.x.push_back(v);
      g.p.push_back(v);
    }
    return g;
  }
};

struct WignerField {
  PhaseGrid grid;
  Eigen::MatrixXd W;  // W(i, j) at p[i], x[j]
  double integral = 0.0;
  bool support_warning = false;
};

namespace detail {
/// Trapezoid integral of a field sampled on (p rows, x cols).
inline double trapezoid2d(const Eigen::MatrixXd& f, const std::vector<double>& x, const std::vector<double>& p) {
  auto weights = [](const std::vector<double>& g) {
    std::vector<double> w(g.size(), 0.0);
    for (size_t i = 0; i + 1 < g.size(); ++i) {
      const double h = 0.5 * (g[i + 1] - g[i]);
      w[i] += h;
      w[i + 1] += h;
    }
    return w;
  };
  const auto wx = weights(x), wp = weights(p);
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) s += wp[i] * wx[j] * f(i, j);
  return s;
}
}  // namespace detail

/// Wigner function W(beta) = (2/pi) Tr[rho D(beta) P D(beta)^dag] = (2/pi) Tr[rho D(2 beta) P].
/// Displacement matrix elements use the closed Laguerre form, so no displacement
/// operator is truncated; only rho carries the cutoff.
inline WignerField wigner(const DensityMatrix& rho, const PhaseGrid& grid) {
  const int d = rho.space.dim;
  WignerField out;
  out.grid = grid;
  out.W.resize(static_cast<Eigen::Index>(grid.p.size()), static_cast<Eigen::Index>(grid.x.size()));
  std::vector<double> lfact(d + 1);
  for (int n = 0; n <= d; ++n) lfact[n] = std::lgamma(n + 1.0);
  std::vector<double> lag(d);

  for (size_t ip = 0; ip < grid.p.size(); ++ip) {
    for (size_t ix = 0; ix < grid.x.size(); ++ix) {
      const cplx gamma = 2.0 * cplx(grid.x[ix], grid.p[ip]);
      const double r2 = std::norm(gamma);
      const double logr = r2 > 0 ? 0.5 * std::log(r2) : 0.0;
      const double arg = std::arg(gamma);
      cplx acc = 0.0;
      // <n|D(g)|m> for n = m + k (k >= 0): sqrt(m!/n!) g^k e^{-|g|^2/2} L_m^{(k)}(|g|^2)
      // <m|D(g)|n> for n = m + k: sqrt(m!/n!) (-g*)^k e^{-|g|^2/2} L_m^{(k)}(|g|^2)
      for (int k = 0; k < d; ++k) {
        if (r2 == 0.0 && k > 0) break;
        const int mmax = d - k;
        // Laguerre recurrence in m for fixed order k.
        lag[0] = 1.0;
        if (mmax > 1) lag[1] = 1.0 + k - r2;
        for (int m = 1; m + 1 < mmax; ++m)
          lag[m + 1] = ((2.0 * m + 1.0 + k - r2) * lag[m] - (m + k) * lag[m - 1]) / (m + 1.0);
        for (int m = 0; m < mmax; ++m) {
          const int n = m + k;
          const double mag_log = 0.5 * (lfact[m] - lfact[n]) + (k > 0 ? k * logr : 0.0) - 0.5 * r2;
          const double mag = std::exp(mag_log) * lag[m];
          const cplx e_nm = mag * std::polar(1.0, k * arg);                        // <n|D|m>
          // Tr[rho D P] = sum_{m,n} rho(m,n) <n|D|m> (-1)^m
          acc += rho.data(m, n) * e_nm * ((m % 2 == 0) ? 1.0 : -1.0);
          if (k > 0) {
            const cplx e_mn = mag * std::polar(1.0, k * (std::numbers::pi - arg));  // <m|D|n>
            acc += rho.data(n, m) * e_mn * ((n % 2 == 0) ? 1.0 : -1.0);
          }
        }
      }
      out.W(static_cast<Eigen::Index>(ip), static_cast<Eigen::Index>(ix)) = (2.0 / std::numbers::pi) * acc.real();
    }
  }
  if (grid.x.size() > 1 && grid.p.size() > 1) {
    out.integral = detail::trapezoid2d(out.W, grid.x, grid.p);
    out.support_warning = std::abs(out.integral - 1.0) > 0.05;
  }
  return out;
}

}  // namespace kerrcat

#endif  // KERRCAT_FOCK_HPP
