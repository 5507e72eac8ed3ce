#pragma once

#include <cstdint>
#include <functional>

#include "nclp/density.hpp"
#include "nclp/matcore.hpp"

namespace nclp {

// T_e(x) = Σ_{i≤j} e_i x e_j
Mat triangular_project(const Mat& x, const BlockSpectrum& blocks);
// x − T_e(x); equals Σ_{i>j} e_i x e_j when the blocks cover the identity.
Mat triangular_complement(const Mat& x, const BlockSpectrum& blocks);

// A linear map on M_n. `adjoint` (with respect to tr(x* y)) is optional and
// only used to accelerate norm estimation.
struct LinearMap {
  std::function<Mat(const Mat&)> apply;
  std::function<Mat(const Mat&)> adjoint;
};

// Symbol table m(k, j) acting on the compressed blocks e_k x e_j.
class BlockMap {
 public:
  BlockMap(BlockSpectrum blocks, Eigen::MatrixXd symbol);

  static BlockMap triangular(BlockSpectrum blocks);

  const BlockSpectrum& blocks() const { return blocks_; }
  const Eigen::MatrixXd& symbol() const { return symbol_; }
  Mat operator()(const Mat& x) const;
  LinearMap as_linear_map() const;

 private:
  BlockSpectrum blocks_;
  Eigen::MatrixXd symbol_;
};

struct NormEstimateOptions {
  int iterations = 200;
  double step = 0.1;
  double decay = 0.5;
  int rejections_before_decay = 20;
  // Norming-functional power iterations run after the ascent when the map
  // exposes an adjoint.
  int power_iterations = 200;
};

// Certified lower bound on ‖map‖_{S_p → S_p}: the best ratio ‖map(x)‖_p/‖x‖_p
// over `trials` seeded starts, each refined by perturbation ascent. Trial k
// uses sub_seed(seed, k), so the result is the running max over trials.
double operator_norm_estimate(const LinearMap& map, const PNorm& p, Eigen::Index dim, int trials,
                              std::uint64_t seed, const NormEstimateOptions& options = {});
double operator_norm_estimate(const BlockMap& map, const PNorm& p, int trials, std::uint64_t seed,
                              const NormEstimateOptions& options = {});

}  // namespace nclp
