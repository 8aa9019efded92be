#include <gtest/gtest.h>

#include <memory>

#include "mfock/formal_algebra.hpp"

using namespace mfock;

namespace {

std::shared_ptr<const StructureConstants> su(int n) {
  static std::map<int, std::shared_ptr<const StructureConstants>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_shared<const StructureConstants>(build_su(n));
  return p;
}

const Arg kMN = kArgM + kArgN;
const Arg kMNR = kArgM + kArgN + kArgR;

Polynomial x(int symbol, int mu) { return Polynomial::var(momentum_var(symbol, mu)); }

Expression sum_rho(int N, const std::function<Expression(int)>& f, const Arg& contracted) {
  Expression e;
  for (int rho = 0; rho < N; ++rho) e += contracted.component(rho) * f(rho);
  return e;
}

}  // namespace

TEST(Expression, AntisymmetricNormalForm) {
  EXPECT_EQ(Expression::H(0, 1, 0, kArgM), -Expression::H(0, 0, 1, kArgM));
  EXPECT_TRUE(Expression::H(0, 1, 1, kArgM).is_zero());
  EXPECT_EQ(Expression::S3(1, 0, 2, kArgM), -Expression::S3(0, 1, 2, kArgM));
  EXPECT_EQ(Expression::S3(1, 2, 0, kArgM), Expression::S3(0, 1, 2, kArgM));
  EXPECT_TRUE(Expression::S3(0, 0, 1, kArgM).is_zero());
  EXPECT_TRUE((Expression::J(2, kArgN) - Expression::J(2, kArgN)).is_zero());
}

TEST(Expression, CanonicalText) {
  const Expression e = Expression::J(0, kArgM) - x(1, 0) * Expression::H(2, 0, 1, kMN);
  EXPECT_EQ(e.str(), "J^{1}(m) - n1*H^{3,12}(m+n)");
  EXPECT_EQ(Expression::L(1, kArgN).str(), "L_2(n)");
  EXPECT_EQ(Expression().str(), "0");
}

TEST(Bracket, MfJHHasChainTerm) {
  const auto t = make_table(TableKind::MF, su(2), 3);
  const auto got = bracket(t, Expression::J(0, kArgM), Expression::H(1, 0, 1, kArgN));
  Expression want;
  for (int c = 0; c < 3; ++c) want += Polynomial(t.sc->f(0, 1, c)) * Expression::H(c, 0, 1, kMN);
  EXPECT_EQ(got, want);  // a != b: no chain term
  const auto diag = bracket(t, Expression::J(1, kArgM), Expression::H(1, 0, 1, kArgN));
  EXPECT_EQ(diag, sum_rho(3, [&](int r) { return Expression::S3(0, 1, r, kMN); }, kArgM));
}

TEST(Bracket, Emb2GGIsDH) {
  const auto t = make_table(TableKind::EMB2, su(3), 3);
  const auto got = bracket(t, Expression::G(2, 0, kArgM), Expression::G(7, 1, kArgN));
  Expression want;
  for (int c = 0; c < 8; ++c) want += Polynomial(t.sc->d(2, 7, c)) * Expression::H(c, 0, 1, kMN);
  EXPECT_FALSE(want.is_zero());
  EXPECT_EQ(got, want);
}

TEST(Bracket, Emb2HHVanishes) {
  const auto t = make_table(TableKind::EMB2, su(3), 3);
  EXPECT_TRUE(bracket(t, Expression::H(0, 0, 1, kArgM), Expression::H(0, 1, 2, kArgN)).is_zero());
}

TEST(Bracket, DiffLS1) {
  const auto t = make_table(TableKind::DIFF_EXT, su(2), 3);
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      Expression want = x(1, mu) * Expression::S1(nu, kMN);
      if (mu == nu) want += sum_rho(3, [&](int r) { return Expression::S1(r, kMN); }, kArgM);
      EXPECT_EQ(bracket(t, Expression::L(mu, kArgM), Expression::S1(nu, kArgN)), want);
    }
}

TEST(Bracket, SpeciesOutsideTableRejected) {
  const auto t = make_table(TableKind::MF, su(2), 3);
  EXPECT_THROW(bracket(t, Expression::G(0, 0, kArgM), Expression::J(0, kArgN)), TableMismatch);
  const auto e = make_table(TableKind::EMB2, su(2), 3);
  EXPECT_THROW(bracket(e, Expression::L(0, kArgM), Expression::J(0, kArgN)), TableMismatch);
}

TEST(Bracket, TableNeedsValidN) {
  EXPECT_THROW(make_table(TableKind::MF, su(2), 1), std::invalid_argument);
  EXPECT_THROW(make_table(TableKind::EMB2, su(2), 5), std::invalid_argument);
  EXPECT_NO_THROW(make_table(TableKind::MF, su(2), 2));
}

TEST(Bracket, AntisymmetricAfterReduction) {
  for (TableKind k : {TableKind::MF, TableKind::EMB1, TableKind::CLASSICAL_MF, TableKind::EMB2, TableKind::DIFF_EXT}) {
    const auto t = make_table(k, su(3), 3);
    const auto gm = t.generators(kArgM), gn = t.generators(kArgN);
    for (const auto& gx : gm)
      for (const auto& gy : gn) {
        const auto x = Expression::of(gx), y = Expression::of(gy);
        const auto s = reduce_closedness(bracket(t, x, y) + bracket(t, y, x), 3);
        ASSERT_TRUE(s.is_zero()) << to_string(k) << " " << gx.str() << " " << gy.str() << ": " << s.str();
      }
  }
}

TEST(Bracket, PlainCurrentAlgebraLimit) {
  const auto sc = su(3);
  auto flat = std::make_shared<const StructureConstants>("su3-no-d", sc->f_tensor(), Tensor3(8));
  for (TableKind k : {TableKind::MF, TableKind::EMB1, TableKind::CLASSICAL_MF, TableKind::EMB2, TableKind::DIFF_EXT}) {
    const auto t = make_table(k, flat, 3);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        auto got = bracket(t, Expression::J(a, kArgM), Expression::J(b, kArgN)).without(Species::S1).without(Species::S3);
        Expression want;
        for (int c = 0; c < 8; ++c) want += Polynomial(sc->f(a, b, c)) * Expression::J(c, kMN);
        ASSERT_EQ(got, want) << to_string(k);
      }
  }
}

TEST(Bracket, WittLimitOfLL) {
  const auto t = make_table(TableKind::DIFF_EXT, su(2), 3);
  auto no_charges = [](const Polynomial& p) {
    return p.substitute([](int v) { return v == kVarC1 || v == kVarC2 ? Polynomial() : Polynomial::var(v); });
  };
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      const auto got = bracket(t, Expression::L(mu, kArgM), Expression::L(nu, kArgN)).map_coefficients(no_charges);
      const auto want = x(1, mu) * Expression::L(nu, kMN) - x(0, nu) * Expression::L(mu, kMN);
      EXPECT_EQ(got, want);
    }
}

TEST(Closedness, SpecExamples) {
  const auto m_s1 = sum_rho(3, [](int r) { return Expression::S1(r, kArgM); }, kArgM);
  EXPECT_TRUE(reduce_closedness(m_s1, 3).is_zero());
  const auto p_s1 = sum_rho(3, [](int r) { return Expression::S1(r, kMN); }, kMN);
  EXPECT_TRUE(reduce_closedness(p_s1, 3).is_zero());
  const auto m_s3 = sum_rho(3, [](int r) { return Expression::S3(0, 1, r, kMNR); }, kArgM);
  EXPECT_FALSE(reduce_closedness(m_s3, 3).is_zero());
  const auto n_s1 = sum_rho(3, [](int r) { return Expression::S1(r, kMN); }, kArgN);
  const auto m_s1p = sum_rho(3, [](int r) { return Expression::S1(r, kMN); }, kArgM);
  EXPECT_EQ(reduce_closedness(n_s1, 3), reduce_closedness(-m_s1p, 3));
}

TEST(Closedness, PolynomialMultiplesVanish) {
  const auto rel = sum_rho(4, [](int r) { return Expression::S3(1, 3, r, kMN); }, kMN);
  const Polynomial mult = x(2, 0) * x(0, 3) + Polynomial::var(kVarK) * x(1, 1);
  EXPECT_TRUE(reduce_closedness(mult * rel, 4).is_zero());
  const auto lone = x(0, 0) * Expression::S3(0, 1, 2, kArgM);
  EXPECT_EQ(reduce_closedness(lone + mult * rel, 4), reduce_closedness(lone, 4));
  EXPECT_FALSE(reduce_closedness(lone, 4).is_zero());
}

TEST(Redefine, Examples) {
  const auto got = redefine(Polynomial(2) * Expression::J(0, kArgM) - Expression::J(1, kArgN), 2);
  Expression want = Polynomial(2) * Expression::J(0, kArgM) - Expression::J(1, kArgN);
  for (int mu = 0; mu < 2; ++mu)
    want += Polynomial(2) * x(0, mu) * Expression::G(0, mu, kArgM) - x(1, mu) * Expression::G(1, mu, kArgN);
  EXPECT_EQ(got, want);
  EXPECT_EQ(redefine(Expression::H(0, 0, 1, kArgM), 2), Expression::H(0, 0, 1, kArgM));
}

TEST(Concretize, EpsilonSigns) {
  EXPECT_EQ(concretize(Expression::S3(0, 1, 2, kMN)), Expression::Delta(kMN));
  EXPECT_EQ(concretize(Expression::S3(1, 0, 2, kMN)), -Expression::Delta(kMN));
  EXPECT_TRUE(concretize(Expression::S3(0, 0, 1, kMN)).is_zero());
  EXPECT_THROW(concretize_chain(make_table(TableKind::MF, su(2), 2)), std::invalid_argument);
  EXPECT_THROW(concretize_chain(make_table(TableKind::EMB2, su(2), 3)), TableMismatch);
}

TEST(Embedding, ClassicalIntoEmb2) {
  for (int n : {2, 3})
    for (int N : {2, 3}) {
      const auto rep = verify_embedding(make_table(TableKind::CLASSICAL_MF, su(n), N), make_table(TableKind::EMB2, su(n), N));
      EXPECT_TRUE(rep.all_match()) << n << " " << N;
      EXPECT_FALSE(rep.pairs.empty());
    }
}

TEST(Embedding, MfIntoEmb1) {
  for (int n : {2, 3})
    for (int N : {2, 3}) {
      const auto rep = verify_embedding(make_table(TableKind::MF, su(n), N), make_table(TableKind::EMB1, su(n), N));
      EXPECT_TRUE(rep.all_match()) << n << " " << N;
    }
  const auto c = verify_embedding(make_table(TableKind::MF, su(3), 3, ChainMode::CONCRETE_3D),
                                  make_table(TableKind::EMB1, su(3), 3, ChainMode::CONCRETE_3D));
  EXPECT_TRUE(c.all_match());
}

TEST(Embedding, UnsupportedPair) {
  EXPECT_THROW(verify_embedding(make_table(TableKind::CLASSICAL_MF, su(2), 3), make_table(TableKind::MF, su(2), 3)),
               TableMismatch);
}

TEST(Jacobi, MfJJJVanishes) {
  const auto t = make_table(TableKind::MF, su(3), 3);
  const auto j = jacobiator(t, Expression::J(2, kArgM), Expression::J(2, kArgN), Expression::J(7, kArgR));
  EXPECT_TRUE(j.is_zero()) << j.str();
  // Without the closedness reduction the chain term survives.
  const auto raw = bracket(t, Expression::J(2, kArgM), bracket(t, Expression::J(2, kArgN), Expression::J(7, kArgR))) +
                   bracket(t, Expression::J(2, kArgN), bracket(t, Expression::J(7, kArgR), Expression::J(2, kArgM))) +
                   bracket(t, Expression::J(7, kArgR), bracket(t, Expression::J(2, kArgM), Expression::J(2, kArgN)));
  EXPECT_FALSE(raw.is_zero());
}

TEST(Jacobi, Emb1ObstructionSingleTriple) {
  const auto t = make_table(TableKind::EMB1, su(3), 3);
  const auto j = jacobiator(t, Expression::J(2, kArgM), Expression::G(2, 0, kArgN), Expression::G(7, 1, kArgR));
  const auto want = reduce_closedness(
      Polynomial(t.sc->d(2, 2, 7)) * sum_rho(3, [](int r) { return Expression::S3(0, 1, r, kMNR); }, kArgM), 3);
  EXPECT_FALSE(want.is_zero());
  EXPECT_EQ(j, want);
}

class LieTables : public ::testing::TestWithParam<std::tuple<TableKind, int, int>> {};

TEST_P(LieTables, JacobiSweepVanishes) {
  const auto [kind, n, N] = GetParam();
  const auto sweep = jacobi_sweep(make_table(kind, su(n), N));
  EXPECT_GT(sweep.evaluated, 0u);
  ASSERT_TRUE(sweep.all_zero()) << sweep.nonzero.front().x.str() << " " << sweep.nonzero.front().y.str() << " "
                                << sweep.nonzero.front().z.str() << " -> " << sweep.nonzero.front().value.str();
}

INSTANTIATE_TEST_SUITE_P(
    Small, LieTables,
    ::testing::Combine(::testing::Values(TableKind::MF, TableKind::CLASSICAL_MF, TableKind::EMB2, TableKind::DIFF_EXT),
                       ::testing::Values(2, 3), ::testing::Values(2, 3, 4)));

TEST(Jacobi, MfConcreteModeAgrees) {
  const auto sweep = jacobi_sweep(make_table(TableKind::MF, su(3), 3, ChainMode::CONCRETE_3D));
  EXPECT_TRUE(sweep.all_zero());
}

TEST(Jacobi, Emb1ObstructionSweep) {
  const auto su3 = check_obstruction(make_table(TableKind::EMB1, su(3), 3));
  EXPECT_TRUE(su3.reproduced());
  EXPECT_GT(su3.nonzero, 0u);
  const auto su3c = check_obstruction(make_table(TableKind::EMB1, su(3), 3, ChainMode::CONCRETE_3D));
  EXPECT_TRUE(su3c.reproduced());
  EXPECT_GT(su3c.nonzero, 0u);
  const auto su2 = check_obstruction(make_table(TableKind::EMB1, su(2), 3));
  EXPECT_TRUE(su2.reproduced());
  EXPECT_EQ(su2.nonzero, 0u);
}

TEST(Jacobi, SweepDetectsNonInvariantD) {
  Tensor3 d(3);
  d(0, 0, 0) = Surd(1);
  auto bad = std::make_shared<const StructureConstants>("su2-bad-d", su(2)->f_tensor(), d);
  EXPECT_FALSE(jacobi_sweep(make_table(TableKind::MF, bad, 3)).all_zero());
  EXPECT_FALSE(jacobi_sweep(make_table(TableKind::EMB2, bad, 3)).all_zero());
}
