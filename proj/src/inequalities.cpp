#include "nclp/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "nclp/error.hpp"
#include "nclp/quadrature.hpp"
#include "nclp/spaces.hpp"

namespace nclp {

namespace {

constexpr double kPsdTol = 1e-10;

void require_psd(const Mat& a, const char* name) {
  validate_square(a, name);
  if (!is_psd(a, kPsdTol)) throw Error(ErrorCode::NotPSD, std::string(name) + " is not positive semidefinite");
}

void require_finite_p_at_least_2(const PNorm& p) {
  if (p.is_infinite() || p.value() < 2.0) throw Error(ErrorCode::BadExponents, "need 2 <= p < inf");
}

// tr(h^p) for PSD h, negative roundoff eigenvalues clipped.
double trace_power(const Mat& h, double p) {
  const RealVec ev = eigh(h).values;
  const double top = ev.cwiseAbs().maxCoeff();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kKernelThreshold * top) acc += std::pow(ev(i), p);
  }
  return acc;
}

double trace_power_times(const Mat& h, double power, const Mat& x) {
  return trace_pair(psd_power(h, power), x).real();
}

std::string digest_of(const Mat& a, const Mat& x, std::initializer_list<double> params) {
  InputDigest d;
  d.add(a).add(x);
  for (const double v : params) d.add(v);
  return d.hex();
}

double diff_lhs(const Mat& a, const Mat& x, double p) { return trace_power(a + x, p) - trace_power(a, p); }

}  // namespace

CheckReport check_diff_inequality(const Mat& a, const Mat& x, const PNorm& p) {
  require_finite_p_at_least_2(p);
  require_psd(a, "a");
  require_psd(x, "x");
  require_same_dim(a, x);
  const double pv = p.value();
  const double lhs = diff_lhs(a, x, pv);
  const double cross = schatten_norm(Mat(psd_power(a, pv - 1.0) * x), PNorm(1.0));
  const double own = std::pow(schatten_norm(x, p), pv);
  const double rhs = pv * std::pow(2.0, pv - 1.0) * std::max(cross, own);
  CheckReport r = make_report("diff-inequality", lhs, rhs, 1e-9 * std::max(1.0, rhs));
  r.p_q_params = {pv};
  r.inputs_digest = digest_of(a, x, {pv});
  r.extras = {{"xi", std::max(cross, own)}, {"p_equals_2", pv == 2.0 ? 1.0 : 0.0}};
  return r;
}

CheckReport check_integral_identity(const Mat& a, const Mat& x, const PNorm& p) {
  require_finite_p_at_least_2(p);
  require_psd(a, "a");
  require_psd(x, "x");
  require_same_dim(a, x);
  static const GaussRule rule = gauss_legendre(32);
  const double pv = p.value();
  const double lhs = diff_lhs(a, x, pv);
  const double integral =
      pv * integrate([&](double s) { return trace_power_times(a + s * x, pv - 1.0, x); }, 0.0, 1.0, 1, rule);
  CheckReport r = make_equality_report("integral-identity", lhs, integral,
                                       1e-7 * std::max(std::abs(lhs), std::abs(integral)));
  r.p_q_params = {pv};
  r.inputs_digest = digest_of(a, x, {pv});
  r.extras = {{"relative_error", std::abs(lhs - integral) / std::max(1e-300, std::abs(integral))}};
  return r;
}

CheckReport check_operator_convex_bound(const Mat& a, const Mat& x, const PNorm& p) {
  if (p.is_infinite() || p.value() < 2.0 || p.value() > 3.0) {
    throw Error(ErrorCode::BadExponents, "operator convexity bound needs 2 <= p <= 3");
  }
  require_psd(a, "a");
  require_psd(x, "x");
  require_same_dim(a, x);
  const double pv = p.value();
  const double lhs = diff_lhs(a, x, pv);
  const double constant = pv * (std::pow(2.0, pv - 1.0) - 1.0) / (pv - 1.0);
  const double rhs = constant * (trace_power_times(a, pv - 1.0, x) + trace_power(x, pv));
  CheckReport r = make_report("operator-convex", lhs, rhs, 1e-9 * std::max(1.0, rhs));
  r.p_q_params = {pv};
  r.inputs_digest = digest_of(a, x, {pv});
  return r;
}

CheckReport check_commutative_bound(const Mat& a, const Mat& x, const PNorm& p) {
  require_finite_p_at_least_2(p);
  require_psd(a, "a");
  require_psd(x, "x");
  require_same_dim(a, x);
  if ((a * x - x * a).norm() > 1e-10 * std::max(1.0, a.norm() * x.norm())) {
    throw Error(ErrorCode::DomainError, "a and x must commute");
  }
  const double pv = p.value();
  const double lhs = diff_lhs(a, x, pv);
  const double rhs = (std::pow(2.0, pv) - 1.0) * std::max(trace_power_times(a, pv - 1.0, x), trace_power(x, pv));
  CheckReport r = make_report("commutative-bound", lhs, rhs, 1e-9 * std::max(1.0, rhs));
  r.p_q_params = {pv};
  r.inputs_digest = digest_of(a, x, {pv});
  return r;
}

CheckReport check_araki_kosaki(const Mat& a, const Mat& b, const PNorm& q, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::DomainError, "eta must lie in (0, 1)");
  require_psd(a, "a");
  require_psd(b, "b");
  require_same_dim(a, b);
  const PNorm scaled = q.is_infinite() ? PNorm::infinity() : PNorm(q.value() / eta);
  const double lhs = schatten_norm(Mat(psd_power(a, eta) * psd_power(b, eta)), scaled);
  const double rhs = std::pow(schatten_norm(Mat(a * b), q), eta);
  CheckReport r = make_report("araki-kosaki", lhs, rhs, 1e-10 * std::max(lhs, rhs));
  r.p_q_params = {q.value(), eta};
  r.inputs_digest = digest_of(a, b, {q.value(), eta});
  return r;
}

std::array<Mat, 4> positive_split(const Mat& x) {
  validate_square(x);
  const cplx i(0.0, 1.0);
  const Mat re = (x + x.adjoint()) * 0.5;
  const Mat im = (x - x.adjoint()) / (2.0 * i);
  return {positive_part(re), positive_part(im), negative_part(re), negative_part(im)};
}

CheckReport check_derivative(const Mat& a, const Mat& x, const PNorm& p, double s, double h) {
  if (p.is_infinite() || !(p.value() > 1.0)) throw Error(ErrorCode::BadExponents, "need 1 < p < inf");
  if (!(s >= 0.0) || !(h > 0.0)) throw Error(ErrorCode::DomainError, "need s >= 0 and h > 0");
  require_psd(a, "a");
  require_psd(x, "x");
  require_same_dim(a, x);
  if (!is_psd(a + (s - h) * x, kPsdTol)) throw Error(ErrorCode::NotPSD, "a + (s - h) x is not positive");
  const double pv = p.value();
  const double lhs = (trace_power(a + (s + h) * x, pv) - trace_power(a + (s - h) * x, pv)) / (2.0 * h);
  const double rhs = pv * trace_power_times(a + s * x, pv - 1.0, x);
  CheckReport r = make_equality_report("derivative", lhs, rhs, 1e-5 * std::max(1.0, std::abs(rhs)));
  r.p_q_params = {pv, s, h};
  r.inputs_digest = digest_of(a, x, {pv, s, h});
  r.extras = {{"relative_error", std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs))}};
  return r;
}

CheckReport check_positive_split(const Mat& x, const Density& d, const PNorm& p, double t) {
  const auto parts = positive_split(x);
  const cplx i(0.0, 1.0);
  const Mat resum = parts[0] + i * parts[1] - parts[2] - i * parts[3];
  const double whole = ptd_norm(x, d, p, t);
  double worst = 0.0;
  for (const Mat& part : parts) worst = std::max(worst, ptd_norm(part, d, p, t));
  CheckReport r = make_report("positive-split", worst, whole, 1e-10 * whole);
  r.p_q_params = {p.value(), t};
  r.inputs_digest = digest_of(x, d.matrix(), {p.value(), t});
  r.extras = {{"resummation_error", (resum - x).cwiseAbs().maxCoeff()}};
  return r;
}

}  // namespace nclp
