#include <gtest/gtest.h>

#include <map>
#include <memory>

#include "mfock/fock_oracle.hpp"
#include "mfock/wick_currents.hpp"

using namespace mfock;

namespace {

std::shared_ptr<const StructureConstants> su(int n) {
  static std::map<int, std::shared_ptr<const StructureConstants>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_shared<const StructureConstants>(build_su(n));
  return p;
}

constexpr auto kPos = FrequencySplit::kPositiveModesAnnihilate;
constexpr auto kNeg = FrequencySplit::kNegativeModesAnnihilate;

CommutatorResult bracket(const Current& x, int m, const Current& y, int n, FrequencySplit s = kNeg) {
  return mode_commutator(CurrentMode::of(x, m), CurrentMode::of(y, n), s);
}

}  // namespace

TEST(FieldLayout, AntisymmetricZeta) {
  FieldLayout L(3, 3, ZetaSymmetry::kAntisymmetric);
  EXPECT_EQ(L.species_per_adjoint(), 1 + 3 + 3);
  EXPECT_EQ(L.size(), 21);
  EXPECT_EQ(L.zeta(0, 1, 1).second, 0);
  const auto [i, s] = L.zeta(2, 2, 0);
  EXPECT_EQ(s, -1);
  EXPECT_EQ(L.zeta(2, 0, 2), std::make_pair(i, 1));
  EXPECT_EQ(L.label(i), "zeta^{3,13}");
  EXPECT_EQ(L.label(L.psi(1, 2)), "psi^{2,3}");
}

TEST(FieldLayout, SymmetricZeta) {
  FieldLayout L(3, 2, ZetaSymmetry::kSymmetric);
  EXPECT_EQ(L.species_per_adjoint(), 1 + 2 + 3);
  EXPECT_EQ(L.zeta(0, 1, 0), L.zeta(0, 0, 1));
  EXPECT_EQ(L.zeta(0, 1, 1).second, 1);
}

TEST(Pattern, MatrixCommutator) {
  Pattern a, b;
  a.add(0, 1, Surd(1));
  b.add(1, 0, Surd(1));
  Pattern h;
  h.add(0, 0, Surd(1));
  h.add(1, 1, Surd(-1));
  EXPECT_EQ(Pattern::commutator(a, b), h);
  EXPECT_EQ(Pattern::trace_product(a, b), Surd(1));
  EXPECT_TRUE((a - a).is_zero());
}

TEST(ModeCommutator, KacMoodyBilinear) {
  CurrentFamily fam(su(3), 2);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      Pattern want;
      for (int c = 0; c < 8; ++c) want += fam.sc().f(a, b, c) * fam.J(c).pattern;
      const auto r = bracket(fam.J(a), 2, fam.J(b), -1);
      EXPECT_EQ(r.bilinear, want);
      EXPECT_EQ(r.mode, 1);
      EXPECT_TRUE(r.anomaly.is_zero());
    }
}

TEST(ModeCommutator, ZeroModeAnomalyVanishes) {
  CurrentFamily fam(su(2), 3);
  for (auto s : {kPos, kNeg}) EXPECT_TRUE(bracket(fam.J(0), 0, fam.J(0), 0, s).anomaly.is_zero());
}

TEST(ModeCommutator, GGIsDHWithoutAnomaly) {
  CurrentFamily fam(su(3), 3);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = 0; nu < 3; ++nu) {
          Pattern want;
          for (int c = 0; c < 8; ++c) want += fam.sc().d(a, b, c) * fam.H_pattern(c, mu, nu);
          const auto r = bracket(fam.G(a, mu), 1, fam.G(b, nu), -1);
          ASSERT_EQ(r.bilinear, want) << a << b << mu << nu;
          ASSERT_TRUE(r.anomaly.is_zero());
        }
}

TEST(ModeCommutator, HCommutesWithGAndH) {
  CurrentFamily fam(su(3), 3);
  for (const Current* x : fam.kac_moody()) {
    if (x->label.species != CurrentSpecies::H) continue;
    for (const Current* y : fam.kac_moody()) {
      if (y->label.species == CurrentSpecies::J) continue;
      const auto r = bracket(*x, 1, *y, -1);
      EXPECT_TRUE(r.bilinear.is_zero()) << x->label.str() << " " << y->label.str();
      EXPECT_TRUE(r.anomaly.is_zero());
    }
  }
}

TEST(BuildCurrents, Su2GGVanishes) {
  CurrentFamily fam(su(2), 3);
  EXPECT_FALSE(fam.H(0, 0, 1).pattern.is_zero());
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = 0; nu < 3; ++nu) EXPECT_TRUE(bracket(fam.G(a, mu), 2, fam.G(b, nu), 1).bilinear.is_zero());
}

TEST(BuildCurrents, SymmetricZetaBreaksGG) {
  CurrentFamily fam(su(3), 2, ZetaSymmetry::kSymmetric);
  EXPECT_FALSE(fam.has_T());
  std::size_t broken = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
          if (bracket(fam.G(a, mu), 1, fam.G(b, nu), 0).bilinear !=
              expected_bracket(fam, fam.G(a, mu).label, fam.G(b, nu).label))
            ++broken;
  EXPECT_GT(broken, 0u);
}

TEST(MeasureLevel, Su2N2BothSplits) {
  CurrentFamily fam(su(2), 2);
  // Four species per adjoint index, each contributing the adjoint Casimir 2.
  EXPECT_EQ(measure_level(fam, kPos).k, Surd(-8));
  EXPECT_EQ(measure_level(fam, kNeg).k, Surd(8));
}

TEST(MeasureLevel, LinearInMode) {
  CurrentFamily fam(su(2), 3);
  const auto lv = measure_level(fam, kNeg);
  ASSERT_EQ(lv.samples.size(), 3u);
  EXPECT_EQ(lv.samples[1].second, lv.samples[0].second * Rational(2));
  EXPECT_FALSE(lv.k.is_zero());
  EXPECT_TRUE(bracket(fam.J(0), 1, fam.J(1), -1).anomaly.is_zero());
}

TEST(MeasureLevel, Su3) {
  CurrentFamily fam(su(3), 3);
  // 1 + 3 + 3 species, adjoint Casimir 3.
  EXPECT_EQ(measure_level(fam, kNeg).k, Surd(21));
}

TEST(MeasureK1K2, Su2N2) {
  CurrentFamily fam(su(2), 2);
  const auto pos = measure_k1_k2(fam, kPos);
  EXPECT_EQ(pos.k1, Surd(-3));
  EXPECT_EQ(pos.k2, Surd(-27));
  const auto neg = measure_k1_k2(fam, kNeg);
  EXPECT_EQ(neg.k1, Surd(3));
  EXPECT_EQ(neg.k2, Surd(27));
}

TEST(MeasureK1K2, RejectsDegenerateInput) {
  EXPECT_THROW(measure_k1_k2(CurrentFamily(su(2), 1), kNeg), std::invalid_argument);
  EXPECT_THROW(measure_k1_k2(CurrentFamily(su(2), 2, ZetaSymmetry::kSymmetric), kNeg), std::invalid_argument);
}

TEST(GlCurrents, CommuteWithJ) {
  CurrentFamily fam(su(3), 3);
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu)
      for (int a = 0; a < 8; ++a) {
        const auto r = bracket(fam.T(mu, nu), 1, fam.J(a), -1);
        EXPECT_TRUE(r.bilinear.is_zero());
        EXPECT_TRUE(r.anomaly.is_zero());
      }
}

TEST(GlCurrents, ActOnGAndH) {
  CurrentFamily fam(su(2), 3);
  EXPECT_EQ(bracket(fam.T(0, 1), 1, fam.G(2, 1), -1).bilinear, fam.G(2, 0).pattern);
  EXPECT_TRUE(bracket(fam.T(0, 1), 1, fam.G(2, 0), -1).bilinear.is_zero());
  // [T^1_2, H^{a,23}] = H^{a,13}
  EXPECT_EQ(bracket(fam.T(0, 1), 0, fam.H(1, 1, 2), 2).bilinear, fam.H(1, 0, 2).pattern);
  EXPECT_TRUE(bracket(fam.T(0, 1), 1, fam.H(1, 1, 2), -1).anomaly.is_zero());
}

TEST(CurrentAlgebra, FullTableSu2) {
  CurrentFamily fam(su(2), 3);
  for (auto s : {kPos, kNeg}) {
    const auto rep = check_current_algebra(fam, s, {-2, -1, 0, 1, 2});
    EXPECT_TRUE(rep.ok()) << rep.failures.size();
    EXPECT_EQ(rep.anomalous_pairs, (std::vector<std::string>{"J,J", "T,T"}));
  }
}

TEST(CurrentAlgebra, FullTableSu3) {
  CurrentFamily fam(su(3), 2);
  const auto rep = check_current_algebra(fam, kNeg, {-1, 0, 1});
  EXPECT_TRUE(rep.ok()) << rep.failures.size();
  EXPECT_EQ(rep.anomalous_pairs, (std::vector<std::string>{"J,J", "T,T"}));
}

TEST(CurrentAlgebra, WithoutGl) {
  CurrentFamily fam(su(3), 3);
  const auto rep = check_current_algebra(fam, kPos, {-1, 1}, false);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.anomalous_pairs, (std::vector<std::string>{"J,J"}));
}

TEST(WickJacobi, AllTriplesVanish) {
  CurrentFamily fam(su(2), 2);
  for (auto s : {kPos, kNeg}) {
    EXPECT_EQ(wick_jacobi_failures(fam, s, 1, -1), 0u);
    EXPECT_EQ(wick_jacobi_failures(fam, s, 2, 1), 0u);
    EXPECT_EQ(wick_jacobi_failures(fam, s, 0, 1), 0u);
  }
}

TEST(FockStates, Enumeration) {
  const Oscillators osc{kNeg};
  const FieldLayout layout(3, 2, ZetaSymmetry::kAntisymmetric);
  // 12 components; weight-1 quanta: a zero mode, a and b at energy 1.
  EXPECT_EQ(enumerate_field_states(layout, osc, 0).size(), 1u);
  EXPECT_EQ(enumerate_field_states(layout, osc, 1).size(), 1u + 36u);
  EXPECT_EQ(enumerate_field_states(layout, osc, 2).size(), 1u + 60u + 36u * 37u / 2u);
}

TEST(FockStates, AnnihilationModesKillVacuum) {
  CurrentFamily fam(su(2), 3);
  for (auto s : {kPos, kNeg}) {
    const Oscillators osc{s};
    const int m = split_sign(s);  // a mode that lowers energy
    for (const auto& c : fam.all()) EXPECT_TRUE(apply_current(c.pattern, m, FockState{}, osc).empty()) << c.label.str();
    EXPECT_FALSE(apply_current(fam.J(0).pattern, -m, FockState{}, osc).empty());
  }
}

TEST(FockStates, VacuumElementGivesLevel) {
  // <0|[J^a_m, J^a_-m]|0> from explicit ladder operators, against measure_level.
  CurrentFamily fam(su(2), 3);
  for (auto s : {kPos, kNeg}) {
    const Oscillators osc{s};
    const Surd k = measure_level(fam, s).k;
    for (int m : {1, 2}) {
      Surd vac;
      for (int sign : {1, -1}) {
        const auto first = apply_current(fam.J(1).pattern, -sign * m, FockState{}, osc);
        for (const auto& [t, c] : first) {
          const auto second = apply_current(fam.J(1).pattern, sign * m, t, osc);
          auto it = second.find(FockState{});
          if (it != second.end()) vac += Rational(sign) * c * it->second;
        }
      }
      EXPECT_EQ(vac, -k * Rational(m)) << m;
    }
  }
}

TEST(FockOracle, Su2MatchesWick) {
  CurrentFamily fam(su(2), 2);
  OracleOptions opt;
  opt.level = 3;
  for (auto s : {kPos, kNeg}) {
    const auto rep = verify_fock(fam, s, opt);
    EXPECT_TRUE(rep.ok());
    EXPECT_TRUE(rep.exact_rational);
    EXPECT_EQ(rep.sources, 37u);
    EXPECT_EQ(rep.leaked_columns, 0u);
  }
}

TEST(FockOracle, Su3WithGlCurrents) {
  CurrentFamily fam(su(3), 2);
  OracleOptions opt;
  opt.level = 2;
  opt.include_T = true;
  const auto rep = verify_fock(fam, kNeg, opt);
  EXPECT_TRUE(rep.ok()) << (rep.mismatches.empty() ? "" : rep.mismatches[0].detail);
  EXPECT_FALSE(rep.exact_rational);
}

TEST(FockOracle, DetectsWrongSplit) {
  CurrentFamily fam(su(2), 2);
  OracleOptions opt;
  opt.level = 2;
  opt.wick_split = kPos;
  const auto rep = verify_fock(fam, kNeg, opt);
  ASSERT_FALSE(rep.ok());
  for (const auto& m : rep.mismatches) {
    EXPECT_EQ(m.x.substr(0, 1), "J");
    EXPECT_EQ(m.m + m.n, 0);
  }
}

TEST(FockOracle, FlagsLeakyColumns) {
  CurrentFamily fam(su(2), 2);
  OracleOptions opt;
  opt.level = 2;
  opt.source_weight = 2;
  const auto rep = verify_fock(fam, kNeg, opt);
  EXPECT_GT(rep.leaked_columns, 0u);
  EXPECT_TRUE(rep.ok());
}
