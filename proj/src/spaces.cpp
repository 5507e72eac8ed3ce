#include "nclp/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "nclp/error.hpp"

namespace nclp {

ExponentSpec::ExponentSpec(PNorm p, PNorm q) : p_(std::move(p)), q_(std::move(q)), alpha_(0.0) {
  if (q_.is_infinite() || !(p_.is_infinite() || q_.value() < p_.value())) {
    throw Error(ErrorCode::BadExponents, "need 1 <= q < p <= inf (q = " + q_.to_string() +
                                             ", p = " + p_.to_string() + ")");
  }
  alpha_ = reciprocal_difference(q_, p_);
  if (!(alpha_ > 0.0)) throw Error(ErrorCode::BadExponents, "1/q - 1/p must be positive");
}

double weighted_norm(const Mat& x, const Density& d, const ExponentSpec& spec, Side side) {
  validate_square(x);
  require_same_dim(x, d.matrix());
  const Mat w = power_weight(d, spec.weight_exponent());
  return schatten_norm(side == Side::Left ? Mat(w * x) : Mat(x * w), spec.q());
}

DeltaNorm delta_norm_detail(const Mat& x, const Density& d, const ExponentSpec& spec) {
  DeltaNorm out;
  out.left = weighted_norm(x, d, spec, Side::Left);
  out.right = weighted_norm(x, d, spec, Side::Right);
  out.value = std::max(out.left, out.right);
  out.seminorm = !d.full_support();
  return out;
}

double delta_norm(const Mat& x, const Density& d, const ExponentSpec& spec) {
  return delta_norm_detail(x, d, spec).value;
}

double ptd_norm(const Mat& x, const Density& d, const PNorm& p, double t) {
  if (!p.is_infinite() && p.value() < 2.0) throw Error(ErrorCode::BadExponents, "ptd norm needs p >= 2");
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::DomainError, "t must be positive");
  validate_square(x);
  require_same_dim(x, d.matrix());
  const Mat w = power_weight(d, p.conjugate().reciprocal());
  const double a = std::pow(t, p.reciprocal()) * schatten_norm(x, p);
  const double b = t * schatten_norm(Mat(w * x), PNorm(1.0));
  const double c = t * schatten_norm(Mat(x * w), PNorm(1.0));
  return std::max({a, b, c});
}

Mat symmetric_modulus(const Mat& x) {
  validate_square(x);
  Mat m = (x.adjoint() * x + x * x.adjoint()) * 0.5;
  m = (m + m.adjoint()) * 0.5;
  return func_calculus(m, [](double t) { return t > 0.0 ? std::sqrt(t) : 0.0; });
}

double triangular_weighted_norm(const Mat& x, const BlockSpectrum& blocks, const PNorm& q, double alpha,
                                Part part, Side side) {
  validate_square(x);
  const auto& values = blocks.values();
  const Mat y = blocks.apply_symbol(x, [&](std::size_t i, std::size_t j) {
    const bool keep = part == Part::Upper ? i <= j : i > j;
    if (!keep) return 0.0;
    return std::pow(values[side == Side::Left ? i : j], alpha);
  });
  return schatten_norm(y, q);
}

}  // namespace nclp
