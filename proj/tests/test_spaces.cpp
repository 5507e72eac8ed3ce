#include <cmath>

#include "nclp/density.hpp"
#include "nclp/random.hpp"
#include "nclp/spaces.hpp"
#include "nclp/triangular.hpp"
#include "test_helpers.hpp"

using namespace nclp;
using nclp::testing::code_of;
using nclp::testing::diag;
using nclp::testing::rel_err;
using nclp::testing::unit;

TEST(ExponentSpecTest, Validation) {
  EXPECT_EQ(code_of([] { ExponentSpec(PNorm(2.0), PNorm(2.0)); }), ErrorCode::BadExponents);
  EXPECT_EQ(code_of([] { ExponentSpec(PNorm(2.0), PNorm(3.0)); }), ErrorCode::BadExponents);
  const ExponentSpec s(PNorm::infinity(), PNorm(1.0));
  EXPECT_EQ(s.weight_exponent(), 1.0);
  EXPECT_DOUBLE_EQ(ExponentSpec(PNorm(4.0), PNorm(2.0)).s(), 4.0);
}

TEST(WeightedNormTest, ScalarDensity) {
  CounterRng rng(31);
  const Eigen::Index n = 5;
  const Density d = make_density(identity(n));
  const Mat x = random_gaussian(n, rng);
  const ExponentSpec spec(PNorm(3.0), PNorm(1.5));
  const double want = std::pow(static_cast<double>(n), -spec.weight_exponent()) * schatten_norm(x, 1.5);
  EXPECT_NEAR(weighted_norm(x, d, spec, Side::Left), want, 1e-12 * want);
  EXPECT_NEAR(weighted_norm(x, d, spec, Side::Right), want, 1e-12 * want);
}

TEST(WeightedNormTest, AdjointSymmetry) {
  CounterRng rng(32);
  const Density d = make_density(random_density(6, rng));
  const Mat x = random_gaussian(6, rng);
  const ExponentSpec spec(PNorm(4.0), PNorm(1.0));
  const double r = weighted_norm(x, d, spec, Side::Right);
  EXPECT_NEAR(r, weighted_norm(x.adjoint(), d, spec, Side::Left), 1e-12 * r);
}

TEST(WeightedNormTest, CommutingUnitary) {
  CounterRng rng(33);
  const Mat v = random_unitary(4, rng);
  const Mat dm = v * diag({0.1, 0.2, 0.3, 0.4}) * v.adjoint();
  const Mat u = v * diag({1, -1, 1, -1}) * v.adjoint();
  const Density d = make_density(dm);
  const ExponentSpec spec(PNorm::infinity(), PNorm(1.0));
  EXPECT_NEAR(weighted_norm(u, d, spec, Side::Left), 1.0, 1e-12);
}

TEST(DeltaNormTest, CommutingHermitianSidesAgree) {
  const Density d = make_density(diag({0.1, 0.3, 0.6}));
  const Mat x = diag({2, -1, 0.5});
  const DeltaNorm n = delta_norm_detail(x, d, ExponentSpec(PNorm(2.0), PNorm(1.0)));
  EXPECT_NEAR(n.left, n.right, 1e-14);
  EXPECT_EQ(n.value, std::max(n.left, n.right));
  EXPECT_FALSE(n.seminorm);
}

TEST(DeltaNormTest, VanishesOnKernelCorner) {
  const Density d = make_density(diag({1, 0}));
  const DeltaNorm n = delta_norm_detail(unit(2, 1, 1), d, ExponentSpec(PNorm(2.0), PNorm(1.0)));
  EXPECT_EQ(n.value, 0.0);
  EXPECT_TRUE(n.seminorm);
}

TEST(DeltaNormTest, MaxVersusSum) {
  CounterRng rng(34);
  for (int k = 0; k < 50; ++k) {
    const Density d = make_density(random_density(5, rng));
    const Mat x = random_gaussian(5, rng);
    const ExponentSpec spec(PNorm(3.0), PNorm(1.5));
    const double v = delta_norm(x, d, spec);
    const double sum = weighted_norm(x, d, spec, Side::Left) + weighted_norm(x, d, spec, Side::Right);
    EXPECT_LE(v, sum * (1 + 1e-14));
    EXPECT_LE(sum, 2 * v * (1 + 1e-14));
  }
}

TEST(PtdNormTest, Scalar) {
  const Density d = make_density(identity(1));
  Mat x(1, 1);
  x(0, 0) = cplx(3.0, -4.0);
  EXPECT_NEAR(ptd_norm(x, d, PNorm(2.0), 1.0), 5.0, 1e-14);
}

TEST(PtdNormTest, HomogeneityAndComposition) {
  CounterRng rng(35);
  const Density d = make_density(random_density(5, rng));
  const Mat x = random_gaussian(5, rng);
  const PNorm p(3.0);
  const double t = 8.0;
  const double v = ptd_norm(x, d, p, t);
  const cplx c(-2.0, 1.5);
  EXPECT_NEAR(ptd_norm(c * x, d, p, t), std::abs(c) * v, 1e-12 * v);
  const Mat w = power_weight(d, 1.0 - 1.0 / 3.0);
  const double brute = std::max({std::pow(t, 1.0 / 3.0) * schatten_norm(x, p), t * schatten_norm(Mat(w * x), 1.0),
                                 t * schatten_norm(Mat(x * w), 1.0)});
  EXPECT_NEAR(v, brute, 1e-12 * brute);
}

TEST(PtdNormTest, RejectsSmallP) {
  const Density d = make_density(identity(2));
  EXPECT_EQ(code_of([&] { ptd_norm(identity(2), d, PNorm(1.5), 1.0); }), ErrorCode::BadExponents);
}

TEST(SymmetricModulusTest, Examples) {
  CounterRng rng(36);
  const Mat h = random_hermitian(5, rng);
  EXPECT_LT(rel_err(symmetric_modulus(h), spectral_abs(h)), 1e-10);
  EXPECT_LT(rel_err(symmetric_modulus(unit(2, 0, 1)), identity(2) / std::sqrt(2.0)), 1e-14);
}

TEST(SymmetricModulusTest, StateIdentity) {
  CounterRng rng(37);
  const Density d = make_density(random_density(5, rng));
  const Mat x = random_gaussian(5, rng);
  const Mat s = symmetric_modulus(x);
  const cplx lhs = (d.matrix() * s * s).trace();
  const cplx rhs = 0.5 * ((d.matrix() * x * x.adjoint()).trace() + (d.matrix() * x.adjoint() * x).trace());
  EXPECT_NEAR(lhs.real(), rhs.real(), 1e-12 * std::abs(rhs));
}

TEST(TriangularWeightedNormTest, SingleBlock) {
  CounterRng rng(38);
  const BlockSpectrum b = BlockSpectrum::coordinate({4}, {0.25});
  const Mat x = random_gaussian(4, rng);
  const double got = triangular_weighted_norm(x, b, PNorm(1.5), 0.7, Part::Upper, Side::Left);
  EXPECT_NEAR(got, std::pow(0.25, 0.7) * schatten_norm(x, 1.5), 1e-12 * got);
  EXPECT_EQ(triangular_weighted_norm(x, b, PNorm(1.5), 0.7, Part::Lower, Side::Left), 0.0);
}

TEST(TriangularWeightedNormTest, UpperInputHasNoLowerPart) {
  CounterRng rng(39);
  const BlockSpectrum b = BlockSpectrum::coordinate({2, 1, 2}, {0.1, 0.2, 0.3});
  const Mat x = triangular_project(random_gaussian(5, rng), b);
  EXPECT_EQ(triangular_weighted_norm(x, b, PNorm(2.0), 1.0, Part::Lower, Side::Right), 0.0);
}

TEST(TriangularWeightedNormTest, BlockwiseOracle) {
  CounterRng rng(40);
  const std::vector<Eigen::Index> ranks = {2, 1, 3};
  const std::vector<double> values = {0.05, 0.15, 0.2};
  const BlockSpectrum b = BlockSpectrum::coordinate(ranks, values);
  const Mat x = random_gaussian(6, rng);
  const double alpha = -0.4;
  Mat want = Mat::Zero(6, 6);
  const Eigen::Index start[] = {0, 2, 3};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      want.block(start[i], start[j], ranks[i], ranks[j]) =
          std::pow(values[i], alpha) * x.block(start[i], start[j], ranks[i], ranks[j]);
  const double oracle = schatten_norm(want, 3.0);
  EXPECT_NEAR(triangular_weighted_norm(x, b, PNorm(3.0), alpha, Part::Upper, Side::Left), oracle, 1e-12 * oracle);
}
