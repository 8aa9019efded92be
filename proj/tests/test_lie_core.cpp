#include <gtest/gtest.h>

#include <complex>
#include <sstream>
#include <vector>

#include "mfock/lie_core.hpp"

using namespace mfock;

namespace {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;

// Independent floating-point oracle: standard Gell-Mann style matrices built
// directly, then traces computed by brute force.
std::vector<Mat> generators(int n) {
  std::vector<Mat> out;
  auto zero = [n] { return Mat(n, std::vector<cd>(n)); };
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      Mat s = zero(), a = zero();
      s[j][k] = s[k][j] = 0.5;
      a[j][k] = cd(0, -0.5);
      a[k][j] = cd(0, 0.5);
      out.push_back(s);
      out.push_back(a);
    }
    Mat h = zero();
    const double norm = 1.0 / std::sqrt(2.0 * k * (k + 1));
    for (int i = 0; i < k; ++i) h[i][i] = norm;
    h[k][k] = -k * norm;
    out.push_back(h);
  }
  return out;
}

Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat r(n, std::vector<cd>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

cd trace(const Mat& a) {
  cd t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

void oracle(int n, std::vector<double>& f, std::vector<double>& d) {
  const auto t = generators(n);
  const int dim = static_cast<int>(t.size());
  f.assign(dim * dim * dim, 0.0);
  d.assign(dim * dim * dim, 0.0);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      const Mat ab = mul(t[a], t[b]), ba = mul(t[b], t[a]);
      for (int c = 0; c < dim; ++c) {
        const cd tabc = trace(mul(ab, t[c])), tbac = trace(mul(ba, t[c]));
        f[(a * dim + b) * dim + c] = (cd(0, -2) * (tabc - tbac)).real();
        d[(a * dim + b) * dim + c] = (2.0 * (tabc + tbac)).real();
      }
    }
}

}  // namespace

class SuAgainstOracle : public ::testing::TestWithParam<int> {};

TEST_P(SuAgainstOracle, MatchesTraceOracle) {
  const int n = GetParam();
  const auto sc = build_su(n);
  std::vector<double> f, d;
  oracle(n, f, d);
  const int dim = sc.dim();
  ASSERT_EQ(dim, n * n - 1);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        EXPECT_NEAR(sc.f(a, b, c).to_double(), f[(a * dim + b) * dim + c], 1e-12);
        EXPECT_NEAR(sc.d(a, b, c).to_double(), d[(a * dim + b) * dim + c], 1e-12);
      }
}

TEST_P(SuAgainstOracle, AllIdentitiesExact) {
  const auto report = verify_identities(build_su(GetParam()));
  ASSERT_EQ(report.results.size(), 6u);
  for (const auto& r : report.results) EXPECT_TRUE(r.pass) << to_string(r.identity);
  EXPECT_TRUE(report.all_pass());
}

INSTANTIATE_TEST_SUITE_P(SmallN, SuAgainstOracle, ::testing::Values(2, 3, 4));

TEST(BuildSu, Su2HasUnitF123AndNoD) {
  const auto sc = build_su(2);
  EXPECT_EQ(sc.f(0, 1, 2), Surd(1));
  EXPECT_EQ(sc.f(1, 0, 2), Surd(-1));
  EXPECT_TRUE(sc.d_tensor().is_zero());
}

TEST(BuildSu, Su3DiagonalD) {
  const auto sc = build_su(3);
  EXPECT_FALSE(sc.d_tensor().is_zero());
  // 8th generator is diag(1,1,-2)/(2 sqrt 3).
  EXPECT_EQ(sc.d(7, 7, 7), -Surd::sqrt(Rational(1, 3)));
  EXPECT_EQ(sc.d(2, 2, 7), Surd::sqrt(Rational(1, 3)));
}

TEST(BuildSu, MetricIsIdentity) {
  const auto sc = build_su(3);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) EXPECT_EQ(sc.metric(a, b), a == b ? 1 : 0);
}

TEST(BuildSu, RejectsSmallN) {
  EXPECT_THROW(build_su(1), std::invalid_argument);
  EXPECT_THROW(build_su(0), std::invalid_argument);
}

TEST(VerifyIdentities, PlantedAntisymmetryViolation) {
  Tensor3 f(3), d(3);
  f(0, 0, 1) = Surd(1);
  const auto report = verify_identities(StructureConstants("broken", f, d));
  EXPECT_FALSE(report.all_pass());
  bool found = false;
  for (const auto& r : report.results)
    if (r.identity == Identity::kFAntisymmetric) {
      found = true;
      EXPECT_FALSE(r.pass);
      EXPECT_EQ(r.witness, (std::vector<int>{1, 1, 2}));
    }
  EXPECT_TRUE(found);
}

TEST(VerifyIdentities, QuarticWitnessReported) {
  // Rescaled so(3): antisymmetric in the first pair but not invariant under the delta metric.
  auto f = build_su(2).f_tensor();
  for (auto [a, b, c] : {std::array{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}) {
    f(a, b, c) = Surd(2);
    f(b, a, c) = Surd(-2);
  }
  f(0, 1, 2) = Surd(1);
  f(1, 0, 2) = Surd(-1);
  const auto report = verify_identities(StructureConstants("warped", f, Tensor3(3)));
  EXPECT_FALSE(report.results[0].pass);
  EXPECT_EQ(report.results[0].witness.size(), 4u);
  EXPECT_TRUE(report.results[2].pass);
}

TEST(VerifyIdentities, AbelianPassesEverything) {
  const auto report = verify_identities(StructureConstants("abelian", Tensor3(4), Tensor3(4)));
  EXPECT_TRUE(report.all_pass());
}

TEST(AlgebraFile, RoundTrip) {
  const auto sc = build_su(3);
  std::stringstream ss;
  write_algebra(ss, sc);
  const auto back = read_algebra(ss, "su3-copy");
  ASSERT_EQ(back.dim(), 8);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        EXPECT_EQ(back.f(a, b, c), sc.f(a, b, c));
        EXPECT_EQ(back.d(a, b, c), sc.d(a, b, c));
      }
}

TEST(AlgebraFile, RejectsBadInput) {
  std::stringstream out_of_range("dim 3\nf 1 2 4 1\n");
  EXPECT_THROW(read_algebra(out_of_range, "x"), std::invalid_argument);
  std::stringstream bad_tag("dim 3\ng 1 2 3 1\n");
  EXPECT_THROW(read_algebra(bad_tag, "x"), std::invalid_argument);
  std::stringstream empty("# nothing\n");
  EXPECT_THROW(read_algebra(empty, "x"), std::invalid_argument);
}

TEST(AlgebraFile, DimensionInferredFromEntries) {
  std::stringstream in("f 1 2 3 1\nf 2 3 1 1\n");
  EXPECT_EQ(read_algebra(in, "x").dim(), 3);
}

TEST(Scalars, SurdArithmetic) {
  const Surd r3 = Surd::sqrt(3);
  EXPECT_EQ(r3 * r3, Surd(3));
  EXPECT_EQ(Surd::sqrt(Rational(1, 3)) * Surd(3), r3);
  EXPECT_EQ(Surd::sqrt(2) * Surd::sqrt(6), Surd(2) * r3);
  EXPECT_TRUE((r3 - r3).is_zero());
  EXPECT_EQ(Surd::parse("1/2*sqrt(3) - 1/3"), Surd::make(Rational(1, 2), 3) - Surd(Rational(1, 3)));
  EXPECT_EQ(Surd::parse(Surd::parse("-sqrt(6)/4 + 2").str()), Surd::parse("-sqrt(6)/4 + 2"));
}

TEST(Scalars, RationalOverflowThrows) {
  const Rational big(INT64_MAX / 2);
  EXPECT_THROW(big * big, std::overflow_error);
}
