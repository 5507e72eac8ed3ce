#include <cmath>
#include <numbers>

#include "nclp/error.hpp"
#include "nclp/matcore.hpp"
#include "nclp/pnorm.hpp"
#include "nclp/quadrature.hpp"
#include "nclp/random.hpp"
#include "test_helpers.hpp"

using namespace nclp;
using nclp::testing::diag;
using nclp::testing::rel_err;
using nclp::testing::unit;

TEST(PNormTest, ParsesForms) {
  EXPECT_TRUE(PNorm::parse("inf").is_infinite());
  EXPECT_TRUE(PNorm::parse("∞").is_infinite());
  EXPECT_DOUBLE_EQ(PNorm::parse("3/2").value(), 1.5);
  EXPECT_DOUBLE_EQ(PNorm::parse("1.25").value(), 1.25);
  EXPECT_DOUBLE_EQ(PNorm::parse("4").value(), 4.0);
  EXPECT_THROW(PNorm::parse("abc"), Error);
  EXPECT_THROW(PNorm(0.5), Error);
  EXPECT_THROW(PNorm(std::nan("")), Error);
}

TEST(PNormTest, ConjugateMapsEndpointsExactly) {
  EXPECT_TRUE(PNorm(1.0).conjugate().is_infinite());
  EXPECT_EQ(PNorm::infinity().conjugate().value(), 1.0);
  EXPECT_DOUBLE_EQ(PNorm(3.0).conjugate().value(), 1.5);
  EXPECT_EQ(PNorm::infinity().reciprocal(), 0.0);
}

TEST(PNormTest, ExactReciprocalDifference) {
  // 1/1.2 − 1/1.5 = 5/6 − 2/3 = 1/6
  const auto q = PNorm::parse("1.2");
  const auto p = PNorm::parse("1.5");
  ASSERT_TRUE(q.exact_reciprocal().has_value());
  EXPECT_EQ(*q.exact_reciprocal() - *p.exact_reciprocal(), (Rational{1, 6}));
  EXPECT_DOUBLE_EQ(reciprocal_difference(q, p), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(reciprocal_difference(PNorm(1.0), PNorm::infinity()), 1.0);
}

TEST(MatcoreTest, ValidationErrors) {
  EXPECT_THROW(validate_square(Mat(2, 3)), Error);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = std::nan("");
  try {
    validate_square(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
  try {
    require_same_dim(Mat::Identity(2, 2), Mat::Identity(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
  }
  Mat nh = unit(2, 0, 1);
  try {
    eigh(nh);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(MatcoreTest, FuncCalculusDiagonal) {
  const Mat r = func_calculus(diag({4, 9}), [](double t) { return std::sqrt(t); });
  EXPECT_LT(rel_err(r, diag({2, 3})), 1e-14);
}

TEST(MatcoreTest, FuncCalculusIdentityIsNoop) {
  CounterRng rng(11);
  const Mat a = random_psd(5, rng);
  EXPECT_LT(rel_err(func_calculus(a, [](double t) { return t; }), a), 1e-13);
}

TEST(MatcoreTest, FuncCalculusConjugationInvariant) {
  CounterRng rng(12);
  const Mat a = random_psd(6, rng);
  const Mat u = random_unitary(6, rng);
  auto f = [](double t) { return std::pow(t, 0.37); };
  const Mat lhs = func_calculus(Mat(u * a * u.adjoint()), f);
  const Mat rhs = u * func_calculus(a, f) * u.adjoint();
  EXPECT_LE(rel_err(lhs, rhs), 1e-10);
}

TEST(MatcoreTest, PsdPowerKernelHandling) {
  const Mat a = diag({4, 0});
  EXPECT_LT(rel_err(psd_power(a, 0.5), diag({2, 0})), 1e-15);
  EXPECT_LT(rel_err(psd_power(a, 0.0), diag({1, 0})), 1e-15);
  EXPECT_LT(rel_err(psd_power(a, -1.0), diag({0.25, 0})), 1e-15);
  try {
    psd_power(diag({1, -1}), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(MatcoreTest, PositiveNegativeParts) {
  CounterRng rng(13);
  const Mat h = random_hermitian(5, rng);
  EXPECT_LT(rel_err(positive_part(h) - negative_part(h), h), 1e-13);
  EXPECT_LT(rel_err(positive_part(h) + negative_part(h), spectral_abs(h)), 1e-13);
  EXPECT_GE(min_eigenvalue(positive_part(h)), -1e-12);
  EXPECT_TRUE(is_psd(negative_part(h)));
}

TEST(SchattenTest, Examples) {
  EXPECT_NEAR(schatten_norm(identity(2), 2.0), std::sqrt(2.0), 1e-15);
  const Mat e11 = unit(3, 0, 0);
  for (const double p : {1.0, 1.5, 2.0, 3.0, 7.0}) EXPECT_NEAR(schatten_norm(e11, p), 1.0, 1e-15);
  EXPECT_NEAR(schatten_norm(e11, PNorm::infinity()), 1.0, 1e-15);
}

TEST(SchattenTest, FrobeniusOracle) {
  CounterRng rng(14);
  const Mat x = random_gaussian(5, rng);
  const double tr = (x.adjoint() * x).trace().real();
  EXPECT_NEAR(std::pow(schatten_norm(x, 2.0), 2.0), tr, 1e-12 * tr);
}

TEST(SchattenTest, MonotoneInP) {
  CounterRng rng(15);
  const Mat x = random_gaussian(6, rng);
  double prev = schatten_norm(x, 1.0);
  for (const double p : {1.2, 1.5, 2.0, 3.0, 8.0}) {
    const double v = schatten_norm(x, p);
    EXPECT_LE(v, prev * (1 + 1e-14));
    prev = v;
  }
  EXPECT_LE(schatten_norm(x, PNorm::infinity()), prev * (1 + 1e-14));
  EXPECT_NEAR(schatten_norm(x, PNorm::infinity()), operator_norm(x), 1e-13 * operator_norm(x));
}

TEST(SchattenTest, SingularValuesAgreeWithEigenvaluesForPsd) {
  CounterRng rng(16);
  const Mat a = random_psd(5, rng);
  RealVec s = singular_values(a);
  RealVec e = eigh(a).values;
  std::sort(s.data(), s.data() + s.size());
  EXPECT_LT((s - e).norm(), 1e-12);
}

TEST(TracePairTest, Examples) {
  EXPECT_NEAR(std::abs(trace_pair(identity(4), identity(4)) - cplx(4.0)), 0.0, 1e-15);
  CounterRng rng(17);
  for (int k = 0; k < 100; ++k) {
    const Mat x = random_gaussian(4, rng);
    const Mat y = random_gaussian(4, rng);
    EXPECT_LE(std::abs(trace_pair(x, y) - trace_pair(y, x)), 1e-12);
  }
}

TEST(TracePairTest, DualitySampling) {
  CounterRng rng(18);
  const Mat x = random_gaussian(2, rng);
  const PNorm p(3.0);
  const double nx = schatten_norm(x, p);
  double sup = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Mat y = random_gaussian(2, rng);
    y /= schatten_norm(y, p.conjugate());
    sup = std::max(sup, std::abs(trace_pair(x, y)));
  }
  EXPECT_LE(sup, nx * (1 + 1e-12));
  EXPECT_GE(sup, 0.9 * nx);
}

TEST(TracePairTest, NormingFunctionalAttainsNorm) {
  CounterRng rng(19);
  for (const PNorm p : {PNorm(1.0), PNorm(1.5), PNorm(2.0), PNorm(4.0), PNorm::infinity()}) {
    const Mat y = random_gaussian(4, rng);
    const Mat z = norming_functional(y, p);
    EXPECT_NEAR(schatten_norm(z, p.conjugate()), 1.0, 1e-12);
    EXPECT_NEAR(trace_pair(z.adjoint(), y).real(), schatten_norm(y, p), 1e-12 * schatten_norm(y, p));
  }
  EXPECT_EQ(norming_functional(Mat::Zero(3, 3), PNorm(2.0)).norm(), 0.0);
}

TEST(QuadratureTest, ExactForPolynomials) {
  const GaussRule rule = gauss_legendre(8);
  // Degree 15 = 2n − 1 integrated exactly.
  const double got = integrate([](double x) { return std::pow(x, 15) + 3 * std::pow(x, 14); }, 0.0, 1.0, 1, rule);
  EXPECT_NEAR(got, 1.0 / 16 + 3.0 / 15, 1e-14);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 4, rule), 2.0, 1e-14);
}
