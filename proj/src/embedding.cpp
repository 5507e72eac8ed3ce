#include "nclp/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nclp/error.hpp"
#include "nclp/random.hpp"
#include "nclp/schur.hpp"
#include "nclp/spaces.hpp"

namespace nclp {

SubspaceBasis::SubspaceBasis(std::vector<Mat> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw Error(ErrorCode::InvalidBasis, "basis must be non-empty");
  for (const Mat& v : vectors_) {
    validate_square(v, "basis vector");
    if (v.rows() != vectors_.front().rows()) throw Error(ErrorCode::InvalidBasis, "basis vectors differ in size");
  }
  const auto k = static_cast<Eigen::Index>(vectors_.size());
  Mat gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      gram(i, j) = trace_pair(vectors_[static_cast<std::size_t>(i)].adjoint(), vectors_[static_cast<std::size_t>(j)]);
  const RealVec ev = eigh(gram).values;
  if (!(ev.minCoeff() >= 1e-10 * ev.maxCoeff())) {
    throw Error(ErrorCode::InvalidBasis, "basis is numerically dependent");
  }
}

Mat embed_u(const Mat& x, const Density& d, const PNorm& q, const PNorm& p) {
  validate_square(x);
  require_same_dim(x, d.matrix());
  const double alpha = ExponentSpec(p, q).weight_exponent();
  const Mat e = d.support();
  const Mat f = identity(d.dim()) - e;
  const double scale = x.norm();
  if ((f * x * f).norm() > kCornerTol * scale) {
    throw Error(ErrorCode::CornerNotAnnihilated, "(1-e) x (1-e) is not zero");
  }
  Mat u = schur_apply(x, d.blocks(), inverse_sum_symbol(alpha));
  if (!d.full_support()) {
    const Mat inv = d.blocks().weight(-alpha);
    u += inv * x * f + f * x * inv;
  }
  return u;
}

Mat reconstruct(const Mat& u, const Density& d, const PNorm& q, const PNorm& p) {
  validate_square(u);
  require_same_dim(u, d.matrix());
  const double alpha = ExponentSpec(p, q).weight_exponent();
  const Mat w = d.blocks().weight(alpha);
  return w * u + u * w;
}

Embedding::Embedding(SubspaceBasis basis, Density d, PNorm q, PNorm p)
    : basis_(std::move(basis)),
      density_(std::move(d)),
      q_(std::move(q)),
      p_(std::move(p)),
      alpha_(ExponentSpec(p_, q_).weight_exponent()) {
  for (const Mat& b : basis_.vectors()) {
    Mat u = embed_u(b, density_, q_, p_);
    const double rel = (reconstruct(u, density_, q_, p_) - b).norm() / b.norm();
    residual_ = std::max(residual_, rel);
    images_.push_back(std::move(u));
  }
  if (residual_ > 1e-8) {
    throw Error(ErrorCode::DomainError, "reconstruction residual " + std::to_string(residual_) + " exceeds 1e-8");
  }
}

Mat Embedding::combine(const std::vector<cplx>& c) const {
  Mat x = Mat::Zero(basis_.dim_ambient(), basis_.dim_ambient());
  for (std::size_t k = 0; k < c.size(); ++k) x += c[k] * basis_.vectors()[k];
  return x;
}

Mat Embedding::image(const std::vector<cplx>& c) const {
  Mat u = Mat::Zero(basis_.dim_ambient(), basis_.dim_ambient());
  for (std::size_t k = 0; k < c.size(); ++k) u += c[k] * images_[k];
  return u;
}

Distortion subspace_distortion(const SubspaceBasis& basis, const Density& d, const PNorm& q, const PNorm& p,
                               int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::DomainError, "trials must be >= 1");
  const Embedding emb(basis, d, q, p);
  Distortion out;
  out.trials = trials;
  out.seed = seed;
  out.condition_d = d.blocks().condition();
  out.lower = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<cplx> c(basis.size());
    for (auto& ck : c) ck = rng.complex_normal();
    const double nx = schatten_norm(emb.combine(c), q);
    const double value = schatten_norm(emb.image(c), p) / nx;
    out.lower = std::min(out.lower, value);
    out.upper = std::max(out.upper, value);
  }
  return out;
}

Density heuristic_density(const SubspaceBasis& basis) {
  Mat acc = Mat::Zero(basis.dim_ambient(), basis.dim_ambient());
  for (const Mat& b : basis.vectors()) acc += b.adjoint() * b;
  return make_density((acc + acc.adjoint()) * 0.5);
}

Balance balance_parameter(double a, double b, const PNorm& p, const PNorm& q) {
  if (p.is_infinite() || q.is_infinite() || !(q.value() >= 2.0 && q.value() < p.value())) {
    throw Error(ErrorCode::BadExponents, "need 2 <= q < p < inf");
  }
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DomainError, "alpha and beta must be positive");
  }
  const double pc = p.conjugate().value();
  const double qc = q.conjugate().value();
  Balance out;
  out.t_star = std::pow(a / b, pc);
  out.value = std::pow(a, pc / qc) * std::pow(b, 1.0 - pc / qc);
  return out;
}

}  // namespace nclp
