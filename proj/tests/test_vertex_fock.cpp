#include <gtest/gtest.h>

#include <map>
#include <memory>

#include "mfock/vertex_fock.hpp"

using namespace mfock;

namespace {

constexpr auto kPos = FrequencySplit::kPositiveModesAnnihilate;
constexpr auto kNeg = FrequencySplit::kNegativeModesAnnihilate;

std::shared_ptr<const StructureConstants> su(int n) {
  static std::map<int, std::shared_ptr<const StructureConstants>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_shared<const StructureConstants>(build_su(n));
  return p;
}

std::shared_ptr<const CurrentFamily> family(int n, int N) {
  return std::make_shared<const CurrentFamily>(su(n), N);
}

Momentum mom(int a, int b = 0) { return Momentum{a, b, 0, 0}; }

NumericGenerator gen(Species s, int adj, int i0, const Momentum& m) {
  NumericGenerator g;
  g.species = s;
  g.adj = adj;
  g.idx[0] = i0;
  g.m = m;
  return g;
}

FockState shifted_vacuum(const Momentum& m) {
  FockState s;
  for (int mu = 0; mu < kMaxDim; ++mu) s.lattice[mu] = static_cast<std::int8_t>(m[mu]);
  return s;
}

}  // namespace

TEST(TruncationSpec, Validation) {
  EXPECT_NO_THROW(TruncationSpec{}.validate());
  EXPECT_THROW((TruncationSpec{2, 0, 2, 2}.validate()), std::invalid_argument);
  EXPECT_THROW((TruncationSpec{5, 4, 2, 2}.validate()), std::invalid_argument);
  EXPECT_EQ(TruncationSpec{}.str(), "N=2 L=4 P=2 M=2");
  EXPECT_THROW(VertexFock(family(2, 3), TruncationSpec{}, kNeg), std::invalid_argument);
}

TEST(BuildVertex, ZeroMomentumIsIdentity) {
  VertexFock e(family(2, 2), TruncationSpec{}, kNeg);
  const auto id = build_vertex(e, mom(0), 0);
  ASSERT_GT(id.columns.size(), 1u);
  for (const auto& [col, img] : id.columns) {
    ASSERT_EQ(img.size(), 1u);
    EXPECT_EQ(id.element(col, col), Complex(1));
  }
  for (const auto& [col, img] : build_vertex(e, mom(0), 1).columns) EXPECT_TRUE(img.empty());
}

TEST(BuildVertex, VacuumShift) {
  for (auto s : {kPos, kNeg}) {
    VertexFock e(family(2, 2), TruncationSpec{}, s);
    const auto v = build_vertex(e, mom(1, -1), 0);
    EXPECT_EQ(v.element(shifted_vacuum(mom(1, -1)), FockState{}), Complex(1));
    EXPECT_THROW(build_vertex(e, mom(3), 0), BoundaryError);
  }
}

TEST(BuildVertex, StableUnderCutoff) {
  VertexFock lo(family(2, 2), TruncationSpec{2, 4, 2, 4}, kNeg);
  VertexFock hi(family(2, 2), TruncationSpec{2, 6, 2, 6}, kNeg);
  const auto a = build_vertex(lo, mom(1, 1), -1), b = build_vertex(hi, mom(1, 1), -1);
  std::size_t compared = 0;
  for (const auto& [col, img] : a.columns) {
    if (lo.oscillators().weight(col) > 1) continue;
    for (const auto& [row, c] : img) {
      if (lo.oscillators().weight(row) > 1) continue;
      EXPECT_LT(std::abs(c - b.element(row, col)), 1e-10);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0u);
}

TEST(Realization, ClosedOneChain) {
  // (m+n)_rho S1^rho(m+n) = 0 on safe states.
  VertexFock e(family(2, 2), TruncationSpec{}, kNeg);
  const Momentum a = mom(1, -1);
  std::size_t nonzero = 0;
  for (const auto& s : e.basis(2, 0)) {
    CVector v{{s, Complex(1)}}, sum;
    for (int rho = 0; rho < 2; ++rho) {
      const auto img = e.apply(gen(Species::S1, -1, rho, a), v);
      nonzero += img.size();
      accumulate(sum, img, Complex(a[rho]));
    }
    for (const auto& [t, c] : sum) EXPECT_LT(std::abs(c), 1e-12);
  }
  EXPECT_GT(nonzero, 0u);
}

TEST(Realization, S1VanishesAtNEqualsOne) {
  VertexFock e(family(2, 1), TruncationSpec{1, 4, 2, 2}, kNeg);
  for (const auto& s : e.basis(2, 0))
    for (int m = -2; m <= 2; ++m) EXPECT_TRUE(e.apply(gen(Species::S1, -1, 0, mom(m)), CVector{{s, 1.0}}).empty());
}

TEST(Realization, LevelMatchesWick) {
  for (auto s : {kPos, kNeg}) {
    auto fam = family(2, 2);
    VertexFock e(fam, TruncationSpec{}, s);
    const auto fit = measure_k_vertex(e, 1);
    EXPECT_NEAR(fit.values[0], measure_level(*fam, s).k.to_double(), 1e-8);
    EXPECT_LT(fit.residual, 1e-9);
  }
}

TEST(Charges, MatchGlLevels) {
  auto fam = family(2, 2);
  for (auto s : {kPos, kNeg}) {
    VertexFock e(fam, TruncationSpec{}, s);
    const auto fit = measure_c1_c2(e, 1);
    const auto g = measure_k1_k2(*fam, s);
    const double qp = s == kNeg ? 1.0 : -1.0;
    EXPECT_NEAR(fit.values[0], qp + g.k1.to_double(), 1e-8);
    EXPECT_NEAR(fit.values[1], g.k2.to_double(), 1e-8);
    EXPECT_LT(fit.residual, 1e-9);
    const auto p = predicted_charges(*fam, s, true);
    EXPECT_DOUBLE_EQ(p.c1, qp + g.k1.to_double());
  }
}

TEST(Charges, TrajectorySectorAlone) {
  // Currents switched off: only the q,p normal ordering contributes.
  VertexFock e(family(2, 2), TruncationSpec{}, kNeg, false);
  const auto fit = measure_c1_c2(e);
  EXPECT_NEAR(fit.values[0], 1.0, 1e-10);
  EXPECT_NEAR(fit.values[1], 0.0, 1e-10);
  VertexFock literal(family(2, 2), TruncationSpec{}, kPos, false);
  EXPECT_NEAR(measure_c1_c2(literal).values[0], -1.0, 1e-10);
}

TEST(Charges, RejectNEqualsOne) {
  VertexFock e(family(2, 1), TruncationSpec{1, 4, 2, 2}, kNeg);
  EXPECT_THROW(measure_c1_c2(e), std::invalid_argument);
}

TEST(TableNumeric, Emb2) {
  auto fam = family(2, 2);
  VertexFock e(fam, TruncationSpec{}, kNeg);
  NumericCheckOptions opt;
  opt.max_sources = 25;
  const auto rep = check_table_numeric(make_table(TableKind::EMB2, su(2), 2), e, predicted_charges(*fam, kNeg, true), opt);
  EXPECT_TRUE(rep.ok()) << rep.max_deviation;
  EXPECT_EQ(rep.leaked_columns, 0u);
  EXPECT_EQ(rep.sources, 25u);
}

TEST(TableNumeric, DiffExtBothSplits) {
  auto fam = family(2, 2);
  for (auto s : {kPos, kNeg}) {
    VertexFock e(fam, TruncationSpec{}, s);
    NumericCheckOptions opt;
    opt.max_sources = 15;
    opt.momenta = {mom(1, 0), mom(0, 1), mom(-1, 1)};
    const auto rep = check_table_numeric(make_table(TableKind::DIFF_EXT, su(2), 2), e, predicted_charges(*fam, s, true), opt);
    EXPECT_TRUE(rep.ok()) << rep.max_deviation;
  }
}

TEST(TableNumeric, WrongChargesFail) {
  auto fam = family(2, 2);
  VertexFock e(fam, TruncationSpec{}, kNeg);
  NumericCheckOptions opt;
  opt.max_sources = 15;
  opt.momenta = {mom(1, 0), mom(0, 1)};
  auto ch = predicted_charges(*fam, kNeg, true);
  ch.c2 += 0.5;
  const auto rep = check_table_numeric(make_table(TableKind::DIFF_EXT, su(2), 2), e, ch, opt);
  EXPECT_FALSE(rep.ok());
  ASSERT_FALSE(rep.worst.empty());
  EXPECT_EQ(rep.worst[0].bracket.substr(0, 2), "[L");
}

TEST(TableNumeric, Su3Emb2) {
  auto fam = family(3, 2);
  VertexFock e(fam, TruncationSpec{2, 3, 2, 2}, kNeg);
  NumericCheckOptions opt;
  opt.max_sources = 6;
  opt.momenta = {mom(1, 0), mom(0, 1)};
  const auto rep = check_table_numeric(make_table(TableKind::EMB2, su(3), 2), e, predicted_charges(*fam, kNeg, true), opt);
  EXPECT_TRUE(rep.ok()) << rep.max_deviation;
}

TEST(TableNumeric, RejectsOtherTables) {
  auto fam = family(2, 2);
  VertexFock e(fam, TruncationSpec{}, kNeg);
  EXPECT_THROW(check_table_numeric(make_table(TableKind::MF, su(2), 2), e, {}), std::invalid_argument);
}

TEST(Degeneration, WittClosureAtNEqualsOne) {
  auto fam = family(2, 1);
  VertexFock e(fam, TruncationSpec{1, 4, 2, 2}, kNeg);
  EXPECT_LT(witt_closure_deviation(e), 1e-10);
  // L acts nontrivially on a p-excited state, so the closure is not vacuous.
  FockState s;
  s.insert(quantum_code(QuantumKind::kP, 0, 1));
  const CVector v{{s, 1.0}};
  EXPECT_FALSE(e.apply(gen(Species::L, -1, 0, mom(-1)), v).empty());
}

TEST(Convergence, NearBoundaryDeviationsShrink) {
  auto fam = family(2, 2);
  const auto rep = check_convergence(make_table(TableKind::DIFF_EXT, su(2), 2), fam, TruncationSpec{}, kNeg,
                                     predicted_charges(*fam, kNeg, true), 6);
  EXPECT_FALSE(rep.points.empty());
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.high.L, 6);
}
