#include "nclp/density.hpp"
#include "nclp/random.hpp"
#include "nclp/schur.hpp"
#include "nclp/triangular.hpp"
#include "test_helpers.hpp"

using namespace nclp;
using nclp::testing::code_of;
using nclp::testing::rel_err;

TEST(TriangularProjectTest, RankOneBlocks) {
  const BlockSpectrum b = BlockSpectrum::coordinate({1, 1}, {0.25, 0.75});
  Mat x(2, 2);
  x << 1.0, 2.0, 3.0, 4.0;
  Mat want(2, 2);
  want << 1.0, 2.0, 0.0, 4.0;
  EXPECT_EQ(triangular_project(x, b), want);
  EXPECT_EQ(triangular_complement(x, b) + want, x);
}

TEST(TriangularProjectTest, IdempotentAndContractiveOnS2) {
  CounterRng rng(41);
  for (int k = 0; k < 20; ++k) {
    const Density d = make_density(random_block_density(7, 3, 20.0, rng));
    const Mat x = random_gaussian(7, rng);
    const Mat t = triangular_project(x, d.blocks());
    EXPECT_LT((triangular_project(t, d.blocks()) - t).norm(), 1e-14 * x.norm());
    EXPECT_LE(schatten_norm(t, 2.0), schatten_norm(x, 2.0) * (1 + 1e-14));
  }
}

TEST(BlockMapTest, Validation) {
  const BlockSpectrum b = BlockSpectrum::coordinate({1, 2}, {0.2, 0.4});
  EXPECT_EQ(code_of([&] { BlockMap(b, Eigen::MatrixXd::Ones(3, 3)); }), ErrorCode::DimMismatch);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_EQ(code_of([&] { BlockMap(b, bad); }), ErrorCode::SymbolUndefined);
}

TEST(NormEstimateTest, IdentityAndScalar) {
  LinearMap id{[](const Mat& x) { return x; }, [](const Mat& x) { return x; }};
  LinearMap three{[](const Mat& x) { return Mat(3.0 * x); }, {}};
  for (const PNorm p : {PNorm(1.0), PNorm(1.5), PNorm(2.0), PNorm::infinity()}) {
    const double e = operator_norm_estimate(id, p, 4, 3, 9);
    EXPECT_GE(e, 1 - 1e-9);
    EXPECT_LE(e, 1 + 1e-9);
    EXPECT_NEAR(operator_norm_estimate(three, p, 4, 3, 9), 3.0, 1e-9);
  }
}

TEST(NormEstimateTest, SchurMultiplierOnS2IsMaxSymbol) {
  CounterRng rng(42);
  const Density d = make_density(random_block_density(6, 4, 100.0, rng));
  const auto nb = static_cast<Eigen::Index>(d.blocks().size());
  Eigen::MatrixXd symbol(nb, nb);
  for (Eigen::Index i = 0; i < nb; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) symbol(i, j) = rng.uniform(-2.0, 2.0);
  const double want = symbol.cwiseAbs().maxCoeff();
  const double got = operator_norm_estimate(BlockMap(d.blocks(), symbol), PNorm(2.0), 4, 5);
  EXPECT_NEAR(got, want, 1e-6);
}

TEST(NormEstimateTest, LowerBoundAndDeterministic) {
  CounterRng rng(43);
  const Density d = make_density(random_block_density(6, 6, 100.0, rng));
  const BlockMap t = BlockMap::triangular(d.blocks());
  const double a = operator_norm_estimate(t, PNorm(1.0), 4, 17);
  EXPECT_EQ(a, operator_norm_estimate(t, PNorm(1.0), 4, 17));
  // Triangular truncation is a projection: norm ≥ 1; on S_2 it is exactly 1.
  EXPECT_GE(a, 1.0 - 1e-12);
  EXPECT_NEAR(operator_norm_estimate(t, PNorm(2.0), 4, 17), 1.0, 1e-9);
  // More trials can only raise the running max.
  EXPECT_GE(operator_norm_estimate(t, PNorm(1.0), 8, 17), a);
}

TEST(NormEstimateTest, MinMultiplierBelowHalf) {
  CounterRng rng(44);
  const Density d = make_density(random_block_density(5, 5, 1e3, rng));
  const auto nb = static_cast<Eigen::Index>(d.blocks().size());
  Eigen::MatrixXd symbol(nb, nb);
  const auto& v = d.blocks().values();
  for (Eigen::Index i = 0; i < nb; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) symbol(i, j) = std::min(v[i], v[j]) / (v[i] + v[j]);
  for (const PNorm p : {PNorm(1.0), PNorm(3.0), PNorm::infinity()}) {
    const double e = operator_norm_estimate(BlockMap(d.blocks(), symbol), p, 3, 1);
    EXPECT_LE(e, 0.5 * (1 + 1e-9));
    EXPECT_GE(e, 0.5 - 1e-9);  // the diagonal blocks alone give 1/2
  }
}
