#include <gtest/gtest.h>

#include <random>

#include "kerrcat/hamiltonian.hpp"
#include "kerrcat/liouvillian.hpp"

using namespace kerrcat;

namespace {

Matrix random_matrix(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

// Oscillator with thermal loss and gain.
MasterEquation thermal_oscillator(int d, double omega, double kappa, double n_th) {
  const auto L = ladder_ops(FockSpace{d});
  DissipatorList terms;
  terms.push_back({kappa * (1.0 + n_th), L.a, "loss"});
  if (n_th > 0) terms.push_back({kappa * n_th, L.adag, "gain"});
  return MasterEquation(omega * L.n, terms);
}

MasterEquation kerr_cat(int d, double e, double kappa, double gain = 0.1) {
  HamiltonianSpec s;
  s.kind = HamiltonianKind::DKC;
  s.space = FockSpace{d};
  s.params = EffectiveParams::kerr_units(1.0, e);
  const auto L = ladder_ops(s.space);
  return MasterEquation(build_static(s), {{kappa, L.a, "loss"}, {gain * kappa, L.adag, "gain"}});
}

}  // namespace

TEST(Superoperator, MatchesMatrixForm) {
  const auto me = kerr_cat(8, 1.5, 0.2);
  const Matrix L = build_superoperator(me);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Matrix X = random_matrix(8, seed);
    EXPECT_LT(max_abs(unvec(L * vec(X), 8) - apply_lindblad(me, X)), 1e-12);
  }
}

TEST(Superoperator, VecRoundTrip) {
  const Matrix X = random_matrix(5, 9);
  EXPECT_EQ(max_abs(unvec(vec(X), 5) - X), 0.0);
  // Column stacking: entry (i, j) sits at i + j d.
  EXPECT_EQ(vec(X)(2 + 3 * 5), X(2, 3));
}

TEST(Superoperator, PreservesTraceAndHermiticity) {
  const auto me = kerr_cat(10, 2.0, 0.3);
  for (unsigned seed : {4u, 5u}) {
    const Matrix A = random_matrix(10, seed);
    const Matrix X = A + A.adjoint();
    const Matrix Y = apply_lindblad(me, X);
    EXPECT_LT(std::abs(Y.trace()), 1e-11);
    EXPECT_LT(max_abs(Y - Y.adjoint()), 1e-11);
  }
}

TEST(Superoperator, ParitySectorsDecouple) {
  const int d = 8;
  const auto me = kerr_cat(d, 1.0, 0.2);
  ASSERT_TRUE(detail::parity_preserving(me));
  const Matrix L = build_superoperator(me);
  const auto even = detail::sector_indices(d, 0), odd = detail::sector_indices(d, 1);
  EXPECT_EQ(even.size() + odd.size(), static_cast<size_t>(d * d));
  double worst = 0.0;
  for (int i : even)
    for (int j : odd) worst = std::max({worst, std::abs(L(i, j)), std::abs(L(j, i))});
  EXPECT_EQ(worst, 0.0);

  const auto lad = ladder_ops(FockSpace{d});
  const MasterEquation broken(lad.n + 0.1 * (lad.a + lad.adag), {});
  EXPECT_FALSE(detail::parity_preserving(broken));
}

TEST(Superoperator, Guard) {
  const auto me = kerr_cat(12, 1.0, 0.1);
  EXPECT_THROW(build_superoperator(me, 10), Error);
  try {
    build_superoperator(me, 10);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Resource);
  }
  EXPECT_THROW(slowest_coherence_rate(kerr_cat(kDenseEigenGuard + 2, 1.0, 0.1)), Error);
}

TEST(Evolve, DampedCoherentState) {
  // Zero temperature: |alpha> stays coherent with alpha(t) = alpha exp(-(i w + k/2) t).
  const double w = 1.3, k = 0.4;
  const auto me = thermal_oscillator(30, w, k, 0.0);
  const cplx alpha(1.2, 0.3);
  const auto rho0 = DensityMatrix::pure(coherent_state(alpha, me.space()));
  const std::vector<double> ts{0.0, 0.5, 1.5, 3.0};
  const auto tr = evolve(me, rho0, ts);
  ASSERT_EQ(tr.states.size(), ts.size());
  const auto a = ladder_ops(me.space()).a;
  for (size_t i = 0; i < ts.size(); ++i) {
    const cplx expected = alpha * std::exp(cplx(-0.5 * k, -w) * ts[i]);
    EXPECT_NEAR(std::abs((tr.states[i].data * a.data).trace() - expected), 0.0, 1e-7);
    EXPECT_NEAR(std::real(tr.states[i].data.trace()), 1.0, 1e-9);
  }
}

TEST(Evolve, RejectsBadInput) {
  const auto me = thermal_oscillator(6, 1.0, 0.1, 0.0);
  const auto rho0 = DensityMatrix::pure(StateVector::fock(me.space(), 0));
  EXPECT_THROW(evolve(me, rho0, {1.0, 0.5}), Error);
  Matrix bad = rho0.data;
  bad(0, 0) = 2.0;
  EXPECT_THROW(evolve(me, DensityMatrix(me.space(), bad), {0.0, 1.0}), Error);
  EXPECT_TRUE(evolve(me, rho0, {}).states.empty());
}

TEST(Steady, ThermalOccupation) {
  const double n = 0.2;
  const auto me = thermal_oscillator(24, 1.0, 0.5, n);
  const auto sa = steady_state(me);
  const double r = n / (1.0 + n);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(sa.P[static_cast<size_t>(k)], (1.0 - r) * std::pow(r, k), 1e-10);
  EXPECT_NEAR(std::real((sa.rho_ss.data * ladder_ops(me.space()).n.data).trace()), n, 1e-10);
  EXPECT_LT(sa.residual, 1e-10);
  EXPECT_NEAR(sa.P_leak, 1.0 - sa.P[0] - sa.P[1], 1e-15);
}

TEST(Steady, CatSteadyStateIsAStatisticalMixture) {
  const auto sa = steady_state(kerr_cat(30, 4.0, 0.05, 1e-3));
  EXPECT_NEAR(sa.P[0] + sa.P[1], 1.0, 0.01);
  EXPECT_NEAR(sa.P[0], sa.P[1], 0.02);
  EXPECT_TRUE(sa.rho_ss.valid(1e-8));
}

TEST(Coherence, DampedOscillatorRate) {
  // Eigenvalues -(k/2)(p + q) + i w (q - p); the slowest odd mode has p + q = 1.
  const double w = 0.7, k = 0.3;
  const cplx lam = slowest_coherence_rate(thermal_oscillator(12, w, k, 0.0));
  EXPECT_NEAR(lam.real(), -0.5 * k, 1e-10);
  EXPECT_NEAR(std::abs(lam.imag()), w, 1e-10);
}
