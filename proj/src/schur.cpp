#include "nclp/schur.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "nclp/error.hpp"
#include "nclp/quadrature.hpp"

namespace nclp {

MultiplierSymbol min_symbol() {
  return {[](double s, double t) { return std::min(s, t) / (s + t); }, true};
}

MultiplierSymbol max_symbol() {
  return {[](double s, double t) { return std::max(s, t) / (s + t); }, true};
}

MultiplierSymbol resolvent_symbol(double beta, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::DomainError, "eta must lie in [0, 1]");
  if (beta == 0.0) return {[](double, double) { return 0.5; }, true};
  return {[beta, eta](double s, double t) {
            // Divide through by max(s,t)^β to keep the quotient in range.
            const double m = std::max(std::pow(s, beta), std::pow(t, beta));
            const double sb = std::pow(s, beta) / m;
            const double tb = std::pow(t, beta) / m;
            return std::pow(sb, 1.0 - eta) * std::pow(tb, eta) / (sb + tb);
          },
          eta == 0.5};
}

MultiplierSymbol inverse_sum_symbol(double alpha) {
  return {[alpha](double s, double t) { return 1.0 / (std::pow(s, alpha) + std::pow(t, alpha)); }, true};
}

std::vector<std::string> conditioning_warnings(const BlockSpectrum& blocks, double alpha) {
  const double c = blocks.condition(alpha);
  if (!(c > kIllConditioned)) return {};
  char buf[96];
  std::snprintf(buf, sizeof buf, "IllConditioned: max d^a / min d^a = %.3g at a = %.6g", c, alpha);
  return {buf};
}

SchurOutput schur_apply_detail(const Mat& x, const BlockSpectrum& blocks, const MultiplierSymbol& m) {
  validate_square(x);
  const auto& values = blocks.values();
  const std::size_t nb = values.size();
  std::vector<double> table(nb * nb);
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double v = m.eval(values[i], values[j]);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::SymbolUndefined,
                    "symbol is not finite at block pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      table[i * nb + j] = v;
    }
  }
  SchurOutput out;
  out.warnings = conditioning_warnings(blocks, 1.0);
  out.value = blocks.apply_symbol(x, [&](std::size_t i, std::size_t j) { return table[i * nb + j]; });
  if (!blocks.full_support()) {
    const Mat e = blocks.support();
    out.off_support_norm = (x - e * x * e).norm();
  }
  return out;
}

Mat schur_apply(const Mat& x, const BlockSpectrum& blocks, const MultiplierSymbol& m) {
  return schur_apply_detail(x, blocks, m).value;
}

Mat min_multiplier(const Mat& x, const BlockSpectrum& blocks) { return schur_apply(x, blocks, min_symbol()); }

Mat resolvent_weighted(const Mat& y, const BlockSpectrum& blocks, double beta, double eta) {
  return schur_apply(y, blocks, resolvent_symbol(beta, eta));
}

Mat qr_project(const Mat& y, const Mat& z, const Density& d, const PNorm& p, const PNorm& r) {
  validate_square(y);
  require_same_dim(y, z);
  require_same_dim(y, d.matrix());
  const ExponentSpec spec(p, r);
  return schur_apply(y + z, d.blocks(), inverse_sum_symbol(spec.weight_exponent()));
}

bool is_triangular(const Mat& x, const BlockSpectrum& blocks, Part part) {
  const Mat off = blocks.apply_symbol(x, [part](std::size_t i, std::size_t j) {
    const bool inside = part == Part::Upper ? i <= j : i > j;
    return inside ? 0.0 : 1.0;
  });
  return off.norm() <= kTriangularTol * x.norm();
}

namespace {

void require_triangular(const Mat& x, const BlockSpectrum& blocks, Part part, const char* name) {
  if (!is_triangular(x, blocks, part)) {
    throw Error(ErrorCode::NotTriangular,
                std::string(name) + " is not " + (part == Part::Upper ? "upper" : "lower") + " triangular");
  }
}

}  // namespace

Mat lambda_map(const Mat& y, const Mat& z, const BlockSpectrum& blocks, double alpha, Part part) {
  validate_square(y);
  require_same_dim(y, z);
  require_triangular(y, blocks, part, "y");
  require_triangular(z, blocks, part, "z");
  const Mat w = blocks.weight(alpha);
  return schur_apply(w * y + z * w, blocks, inverse_sum_symbol(alpha));
}

RefereePieces referee_pieces(const Mat& y, const Mat& z, const BlockSpectrum& blocks, double alpha0,
                             double alpha1, Part part) {
  if (!(alpha0 >= 0.0 && alpha1 >= 0.0 && alpha0 + alpha1 > 0.0)) {
    throw Error(ErrorCode::BadExponents, "need alpha0, alpha1 >= 0 with positive sum");
  }
  validate_square(y);
  require_same_dim(y, z);
  require_triangular(y, blocks, part, "y");
  require_triangular(z, blocks, part, "z");
  const double gamma = alpha0 + alpha1;
  // η = 0 gives the left piece, η = 1 the right piece.
  return {schur_apply(y, blocks, resolvent_symbol(gamma, 0.0)), schur_apply(z, blocks, resolvent_symbol(gamma, 1.0))};
}

Mat referee_project(const Mat& y, const Mat& z, const BlockSpectrum& blocks, double alpha0, double alpha1,
                    Part part) {
  return referee_pieces(y, z, blocks, alpha0, alpha1, part).sum();
}

namespace {

// g(x) = −f′(x/ξ) = 1/(4 cosh²(x/(2ξ)))
double kernel_slope(double x, double xi) {
  const double c = std::cosh(x / (2.0 * xi));
  return 1.0 / (4.0 * c * c);
}

constexpr int kPanelNodes = 16;

}  // namespace

double kernel_fourier_transform(double xi) {
  static const GaussRule rule = gauss_legendre(kPanelNodes);
  constexpr double kLength = 80.0;  // f(80) < 1e-34
  const int panels = std::max(320, static_cast<int>(std::ceil(kLength * std::abs(xi) * 2.0)));
  const double half = integrate([xi](double x) { return std::cos(x * xi) / (1.0 + std::exp(x)); }, 0.0, kLength,
                                panels, rule);
  return 2.0 * half;
}

CheckReport kernel_positivity_check(int kmax, int quad_points, const KernelCheckOptions& options) {
  if (kmax < 1) throw Error(ErrorCode::DomainError, "kmax must be >= 1");
  if (quad_points < 64) throw Error(ErrorCode::DomainError, "quad_points must be >= 64");
  static const GaussRule rule = gauss_legendre(kPanelNodes);
  const int panels = (quad_points + kPanelNodes - 1) / kPanelNodes;
  const double two_pi = 2.0 * std::numbers::pi;

  double min_gamma = std::numeric_limits<double>::infinity();
  double gamma0_at_one = 0.0;
  double series_error = 0.0;
  for (const double xi : options.gamma_xi) {
    double sum = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double shift = two_pi * k;
      const double gamma =
          integrate([&](double x) { return kernel_slope(x + shift, xi) * std::sin(x); }, 0.0, two_pi, panels, rule);
      min_gamma = std::min(min_gamma, gamma);
      if (k == 0 && xi == 1.0) gamma0_at_one = gamma;
      sum += gamma;
    }
    // f̂(ξ) = (2/ξ²) Σ_k γ_k(ξ)
    const double via_series = 2.0 / (xi * xi) * sum;
    const double direct = kernel_fourier_transform(xi);
    series_error = std::max(series_error, std::abs(via_series - direct) / std::max(1e-300, std::abs(direct)));
  }

  double min_fhat = std::numeric_limits<double>::infinity();
  double symmetry_error = 0.0;
  const int steps = static_cast<int>(std::round(options.fhat_max_xi / options.fhat_step));
  for (int i = 0; i <= steps; ++i) {
    const double xi = i * options.fhat_step;
    const double plus = kernel_fourier_transform(xi);
    const double minus = kernel_fourier_transform(-xi);
    min_fhat = std::min({min_fhat, plus, minus});
    symmetry_error = std::max(symmetry_error, std::abs(plus - minus));
  }
  const double fhat0 = kernel_fourier_transform(0.0);

  // lhs is the worst negativity of γ; the f̂ criterion folds into the verdict.
  CheckReport report = make_report("kernel-positivity", -min_gamma, 0.0, 1e-12);
  if (min_fhat < -1e-10) report.verdict = Verdict::Fail;
  report.p_q_params = {static_cast<double>(kmax), static_cast<double>(quad_points)};
  report.extras = {{"min_gamma", min_gamma},
                   {"gamma0_xi1", gamma0_at_one},
                   {"min_fhat", min_fhat},
                   {"fhat0", fhat0},
                   {"fhat0_error", std::abs(fhat0 - 2.0 * std::numbers::ln2)},
                   {"symmetry_error", symmetry_error},
                   {"series_vs_direct_rel_error", series_error}};
  InputDigest digest;
  digest.add(static_cast<std::uint64_t>(kmax)).add(static_cast<std::uint64_t>(quad_points));
  for (const double xi : options.gamma_xi) digest.add(xi);
  report.inputs_digest = digest.hex();
  return report;
}

}  // namespace nclp
