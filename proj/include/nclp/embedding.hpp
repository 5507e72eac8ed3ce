#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nclp/density.hpp"
#include "nclp/matcore.hpp"
#include "nclp/pnorm.hpp"

namespace nclp {

// Linearly independent matrices spanning a subspace X ⊂ L_q(M_n).
class SubspaceBasis {
 public:
  // Errors: InvalidBasis when the Frobenius Gram matrix is numerically
  // singular (λ_min < 1e-10 · λ_max) or shapes disagree.
  explicit SubspaceBasis(std::vector<Mat> vectors);

  Eigen::Index dim_ambient() const { return vectors_.front().rows(); }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<Mat>& vectors() const { return vectors_; }

 private:
  std::vector<Mat> vectors_;
};

// Maximum corner residual ‖(1−e)x(1−e)‖_2 / ‖x‖_2 accepted by embed_u.
inline constexpr double kCornerTol = 1e-10;

// u(x) solving x = d^α u + u d^α on the three allowed corners, α = 1/q − 1/p:
//   e x e       ↦ Schur multiplier (d_i^α + d_j^α)^{-1}
//   e x (1−e)   ↦ d^{−α} e x (1−e)
//   (1−e) x e   ↦ (1−e) x e d^{−α}
// Errors: CornerNotAnnihilated, BadExponents.
Mat embed_u(const Mat& x, const Density& d, const PNorm& q, const PNorm& p);

// d^α u + u d^α, the left inverse of embed_u.
Mat reconstruct(const Mat& u, const Density& d, const PNorm& q, const PNorm& p);

// embed_u restricted to a subspace, with images of the basis precomputed.
class Embedding {
 public:
  // Errors: as embed_u; DomainError when some basis vector reconstructs
  // with relative residual above 1e-8.
  Embedding(SubspaceBasis basis, Density d, PNorm q, PNorm p);

  double alpha() const { return alpha_; }
  Eigen::Index support_rank() const { return density_.rank(); }
  double reconstruction_residual() const { return residual_; }
  const SubspaceBasis& basis() const { return basis_; }
  const Density& density() const { return density_; }
  const PNorm& q() const { return q_; }
  const PNorm& p() const { return p_; }

  Mat combine(const std::vector<cplx>& coefficients) const;
  Mat image(const std::vector<cplx>& coefficients) const;

 private:
  SubspaceBasis basis_;
  Density density_;
  PNorm q_;
  PNorm p_;
  double alpha_;
  double residual_ = 0.0;
  std::vector<Mat> images_;
};

struct Distortion {
  double lower = 0.0;
  double upper = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  double condition_d = 0.0;

  double ratio() const { return upper / lower; }
};

// Over seeded random combinations x of the basis with ‖x‖_q = 1, the min and
// max of ‖embed_u(x)‖_p.
Distortion subspace_distortion(const SubspaceBasis& basis, const Density& d, const PNorm& q, const PNorm& p,
                               int trials, std::uint64_t seed);

// Heuristic density Σ_k b_k* b_k / tr(·) for a basis. This is a convenience
// for experiments only; it is not an optimal change of density.
Density heuristic_density(const SubspaceBasis& basis);

struct Balance {
  double t_star = 0.0;
  double value = 0.0;
};

// argmin/min over t > 0 of max{t^{1/p−1/q} a, t^{1−1/q} b}, 2 ≤ q < p < ∞:
// t* = (a/b)^{p'}, value = a^{p'/q'} b^{1−p'/q'}.
Balance balance_parameter(double a, double b, const PNorm& p, const PNorm& q);

}  // namespace nclp
