#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nclp/density.hpp"
#include "nclp/matcore.hpp"
#include "nclp/pnorm.hpp"
#include "nclp/spaces.hpp"

namespace nclp {

// Scalar symbol m(d_i, d_j) of a Schur multiplier in the density eigenbasis.
struct MultiplierSymbol {
  std::function<double(double, double)> eval;
  bool symmetric = false;
};

MultiplierSymbol min_symbol();  // min(s,t)/(s+t)
MultiplierSymbol max_symbol();  // max(s,t)/(s+t)
// s^{(1−η)β} t^{ηβ} / (s^β + t^β); β = 0 degenerates to 1/2.
MultiplierSymbol resolvent_symbol(double beta, double eta);
// (s^α + t^α)^{-1}
MultiplierSymbol inverse_sum_symbol(double alpha);

// Resolvent maps warn once max_k d_k^α / min_k d_k^α exceeds this.
inline constexpr double kIllConditioned = 1e12;

// IllConditioned warning for the weight d^alpha, or nothing.
std::vector<std::string> conditioning_warnings(const BlockSpectrum& blocks, double alpha);

struct SchurOutput {
  Mat value;
  // ‖x − e x e‖_2: the part of the input outside the support, dropped.
  double off_support_norm = 0.0;
  std::vector<std::string> warnings;
};

// Σ_{i,j} m(d_i, d_j) e_i x e_j. Errors: SymbolUndefined.
SchurOutput schur_apply_detail(const Mat& x, const BlockSpectrum& blocks, const MultiplierSymbol& m);
Mat schur_apply(const Mat& x, const BlockSpectrum& blocks, const MultiplierSymbol& m);

Mat min_multiplier(const Mat& x, const BlockSpectrum& blocks);

// L_{d^{(1−η)β}} R_{d^{ηβ}} (L_{d^β} + R_{d^β})^{-1}
Mat resolvent_weighted(const Mat& y, const BlockSpectrum& blocks, double beta, double eta);

// (L_{d^α} + R_{d^α})^{-1}(y + z) with α = 1/r − 1/p. Errors: BadExponents.
Mat qr_project(const Mat& y, const Mat& z, const Density& d, const PNorm& p, const PNorm& r);

// Off-part norm ≤ kTriangularTol · ‖x‖_2 counts as triangular.
inline constexpr double kTriangularTol = 1e-10;
bool is_triangular(const Mat& x, const BlockSpectrum& blocks, Part part);

// (L_{d^α} + R_{d^α})^{-1}(d^α y + z d^α) on triangular y, z. Errors: NotTriangular.
Mat lambda_map(const Mat& y, const Mat& z, const BlockSpectrum& blocks, double alpha, Part part = Part::Upper);

// Splits the two pieces of the referee projection:
//   y ↦ (L_{d^γ}+R_{d^γ})^{-1} L_{d^γ}(y),  z ↦ (L_{d^γ}+R_{d^γ})^{-1} R_{d^γ}(z),  γ = α0 + α1.
struct RefereePieces {
  Mat from_y;
  Mat from_z;
  Mat sum() const { return from_y + from_z; }
};
RefereePieces referee_pieces(const Mat& y, const Mat& z, const BlockSpectrum& blocks, double alpha0,
                             double alpha1, Part part = Part::Upper);
// Errors: NotTriangular, BadExponents (α0, α1 ≥ 0 and α0 + α1 > 0 required).
Mat referee_project(const Mat& y, const Mat& z, const BlockSpectrum& blocks, double alpha0, double alpha1,
                    Part part = Part::Upper);

}  // namespace nclp

#include "nclp/report.hpp"

namespace nclp {

struct KernelCheckOptions {
  // ξ values at which γ_k(ξ) is evaluated.
  std::vector<double> gamma_xi = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  // Half-width and step of the symmetric grid on which f̂ is evaluated.
  double fhat_max_xi = 10.0;
  double fhat_step = 0.5;
};

// Positive-definiteness certificate for f(x) = 1/(1 + e^{|x|}):
//   γ_k(ξ) = ∫_0^{2π} g(x + 2πk) sin x dx,  g(x) = −f′(x/ξ),  k = 0…kmax,
// by composite Gauss–Legendre with `quad_points` nodes per γ_k, plus a direct
// evaluation of f̂ on a symmetric grid. Pass iff min γ ≥ −1e-12 and min f̂ ≥ −1e-10.
CheckReport kernel_positivity_check(int kmax, int quad_points, const KernelCheckOptions& options = {});

// f̂(ξ) = 2 ∫_0^∞ cos(xξ)/(1 + e^x) dx by quadrature.
double kernel_fourier_transform(double xi);

}  // namespace nclp
