#include <gtest/gtest.h>

#include "kerrcat/dissipation.hpp"

using namespace kerrcat;

namespace {

CircuitParams sts(double eps2_over_K, int M = 2, int N = 4) {
  CircuitParams c;
  c.M = M;
  c.N = N;
  c.delta_phi = delta_phi_for_eps2(c, eps2_over_K);
  return c;
}

const DissipatorTerm* find(const DissipatorList& l, const std::string& label) {
  for (const auto& t : l)
    if (t.label == label) return &t;
  return nullptr;
}

}  // namespace

TEST(Bath, BoseEinstein) {
  EXPECT_NEAR(bose_einstein(units::from_mhz(6000.0), 0.05), 3.16395e-3, 1e-8);
  // hbar w = k_B T ln 2 gives n = 1.
  const double T = 0.05;
  const double w = std::log(2.0) * units::k_B * T / (units::hbar * 1e6);
  EXPECT_NEAR(bose_einstein(w, T), 1.0, 1e-12);
  EXPECT_THROW(bose_einstein(0.0, 0.05), Error);
  EXPECT_THROW(bose_einstein(1.0, -1.0), Error);
}

TEST(Bath, MissingEntriesAreErrors) {
  BathSpec b;
  b.omega_d = 1.0;
  EXPECT_THROW(b.kappa_at(FreqLabel::Half), Error);
  EXPECT_THROW(b.occupation(FreqLabel::Half), Error);
  b.kappa[FreqLabel::Half] = -1.0;
  EXPECT_THROW(b.kappa_at(FreqLabel::Half), Error);
  try {
    b.kappa_at(FreqLabel::Half);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BathSpec);
  }
}

TEST(Bath, DetailedBalance) {
  const auto b = BathSpec::flat(0.01, 0.05, units::from_mhz(12000.0));
  for (auto l : kAllLabels) {
    const double n = b.occupation(l);
    EXPECT_NEAR(b.gamma(l) / b.upsilon(l), n / (1.0 + n), 1e-14);
    EXPECT_NEAR(b.upsilon(l) - b.gamma(l), 0.01, 1e-15);
  }
  // Higher frequencies are colder.
  EXPECT_GT(b.occupation(FreqLabel::Half), b.occupation(FreqLabel::ThreeHalves));
}

TEST(Sets, RwaHasOnlySingleHalfFrequencyLossAndGain) {
  const auto c = sts(2.0);
  const auto p = sts_effective_params(c);
  const auto b = BathSpec::fixed_occupation(0.01, 0.1, c.omega_d);
  const FockSpace s{10};
  const auto l = build_dissipators(DissipatorSet::O2Rwa, p, b, s);
  ASSERT_EQ(l.size(), 2u);
  const auto L = ladder_ops(s);
  EXPECT_EQ(max_abs(find(l, "wd/2 loss")->jump.data - L.a.data), 0.0);
  EXPECT_NEAR(find(l, "wd/2 loss")->rate, 0.011, 1e-15);
  EXPECT_NEAR(find(l, "wd/2 gain")->rate, 0.001, 1e-15);
}

TEST(Sets, LeadingOrderStructure) {
  const auto c = sts(4.0);
  const auto p = sts_effective_params(c);
  const auto b = BathSpec::fixed_occupation(0.01, 0.0, c.omega_d);
  const FockSpace s{10};
  const auto l = build_dissipators(DissipatorSet::O2, p, b, s);
  // Zero occupation: gain channels vanish.
  EXPECT_EQ(find(l, "wd/2 gain"), nullptr);
  const auto* loss = find(l, "wd/2 loss");
  ASSERT_NE(loss, nullptr);
  const double g = 2.0 * p.G2 / c.omega_d;
  EXPECT_NEAR(std::real(loss->jump.data(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::real(loss->jump.data(1, 0)), g, 1e-15);
  const auto* l3 = find(l, "3wd/2 loss");
  ASSERT_NE(l3, nullptr);
  EXPECT_NEAR(l3->rate / 0.01, std::pow(3.0 * p.G2 / c.omega_d, 2), 1e-18);
}

TEST(Sets, SymmetricJunctionsHaveNoTwoPhotonChannel) {
  const auto c = sts(4.0);
  const auto l = build_dissipators(DissipatorSet::O34, sts_effective_params(c),
                                   BathSpec::fixed_occupation(0.01, 0.1, c.omega_d), FockSpace{10});
  EXPECT_EQ(find(l, "wd two-photon loss"), nullptr);
  EXPECT_NE(find(l, "wd/2 composite loss"), nullptr);

  auto asym = c;
  asym.E_J1 = 90e3;
  asym.E_J3 = 70e3;
  const auto la = build_dissipators(DissipatorSet::O34, sts_effective_params(asym),
                                    BathSpec::fixed_occupation(0.01, 0.1, c.omega_d), FockSpace{10});
  EXPECT_NE(find(la, "wd two-photon loss"), nullptr);
}

TEST(Sets, RatesAreLinearInKappa) {
  const auto c = sts(3.0);
  const auto p = sts_effective_params(c);
  for (auto set : {DissipatorSet::O2Rwa, DissipatorSet::O2, DissipatorSet::O34}) {
    const auto a = build_dissipators(set, p, BathSpec::flat(0.01, 0.05, c.omega_d), FockSpace{8});
    const auto b = build_dissipators(set, p, BathSpec::flat(0.03, 0.05, c.omega_d), FockSpace{8});
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i].rate / a[i].rate, 3.0, 1e-12) << a[i].label;
  }
}

TEST(Sets, MissingOmegaDIsAnError) {
  auto p = EffectiveParams::kerr_units(1.0, 2.0);
  p.omega_d = 0.0;
  EXPECT_THROW(build_dissipators(DissipatorSet::O2, p, BathSpec::fixed_occupation(0.01, 0.1), FockSpace{8}), Error);
  EXPECT_NO_THROW(
      build_dissipators(DissipatorSet::O2Rwa, p, BathSpec::fixed_occupation(0.01, 0.1), FockSpace{8}));
}

TEST(Sets, NamesRoundTrip) {
  for (auto s : {DissipatorSet::O2Rwa, DissipatorSet::O2, DissipatorSet::O34, DissipatorSet::StrongMod,
                 DissipatorSet::Squid})
    EXPECT_EQ(dissipator_set_from_string(to_string(s)), s);
  EXPECT_FALSE(dissipator_set_from_string("o5").has_value());
}

TEST(StrongMod, CorrectionRatio) {
  for (double dp : {0.05, 0.2, 0.5}) {
    CircuitParams c;
    c.M = c.N = 1;
    c.delta_phi = dp;
    const auto p = strong_modulation_params(c);
    EXPECT_NEAR(p.G2p / p.G2, dp * dp / 8.0, 1e-12);
  }
}

TEST(StrongMod, WeakDriveLimitMatchesLeadingOrder) {
  CircuitParams c;
  c.M = c.N = 1;
  c.delta_phi = 1e-4;
  const auto b = BathSpec::flat(0.01, 0.05, c.omega_d);
  const auto [ps, ls] = strong_modulation_set(c, b, FockSpace{8});
  const auto po = sts_effective_params(c);
  const auto lo = build_dissipators(DissipatorSet::O2, po, b, FockSpace{8});
  EXPECT_NEAR(ps.eps2 / po.eps2, 1.0, 1e-6);
  for (const auto& t : lo) {
    const auto* u = find(ls, t.label);
    ASSERT_NE(u, nullptr) << t.label;
    EXPECT_NEAR(u->rate, t.rate, 1e-6 * t.rate);
    EXPECT_LT(max_abs(u->jump.data - t.jump.data), 1e-6);
  }
  EXPECT_THROW(strong_modulation_params([] {
                 CircuitParams a;
                 a.E_J1 = 90e3;
                 return a;
               }()),
               Error);
}

TEST(Squid, SqueezingCorrectionHasOppositeSign) {
  CircuitParams q;
  q.topology = Topology::SQUID;
  q.M = q.N = 1;
  q.delta_phi = 0.1;
  CircuitParams s;
  s.M = s.N = 1;
  s.delta_phi = 0.1;
  const auto bq = BathSpec::flat(0.01, 0.05, q.omega_d);
  const auto lq = build_dissipators(DissipatorSet::Squid, squid_effective_params(q), bq, FockSpace{8});
  const auto ls = build_dissipators(DissipatorSet::O2, sts_effective_params(s), bq, FockSpace{8});
  const double gq = std::real(find(lq, "wd/2 loss")->jump.data(1, 0));
  const double gs = std::real(find(ls, "wd/2 loss")->jump.data(1, 0));
  // The SQUID squeezing amplitude has the opposite sign, so both corrections point the same way.
  EXPECT_GT(gq * squid_effective_params(q).eps2, 0.0);
  EXPECT_GT(gs * sts_effective_params(s).eps2, 0.0);
  EXPECT_NE(find(lq, "3wd/2 loss"), nullptr);
}

TEST(Dephasing, ActsOnFockDiagonal) {
  const FockSpace s{6};
  const auto t = dephasing_term(0.3, s);
  EXPECT_EQ(t.rate, 0.3);
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(std::real(t.jump.data(n, n)), double(n), 1e-14);
  EXPECT_THROW(dephasing_term(-1.0, s), Error);
}
