#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nclp/matcore.hpp"

namespace nclp {

inline constexpr double kDefaultClusterTol = 1e-9;
inline constexpr double kTraceTol = 1e-12;

// Ordered family of mutually orthogonal projections e_1, …, e_m with scalar
// levels d_1 < … < d_m. Each projection is stored through an isometry W_k
// (e_k = W_k W_k*), and the stacked isometry W = [W_1 … W_m] gives block
// coordinates W* x W in which every block map is an entrywise scaling.
class BlockSpectrum {
 public:
  BlockSpectrum(std::vector<double> values, std::vector<Mat> bases);

  static BlockSpectrum from_projections(std::vector<double> values, const std::vector<Mat>& projections);
  // Contiguous coordinate blocks of the given ranks (standard basis of C^n).
  static BlockSpectrum coordinate(const std::vector<Eigen::Index>& ranks, std::vector<double> values);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Mat>& bases() const { return bases_; }
  std::vector<Eigen::Index> ranks() const;
  Eigen::Index rank() const { return stacked_.cols(); }
  Mat projection(std::size_t k) const;
  std::vector<Mat> projections() const;
  Mat support() const;
  bool full_support() const { return rank() == dim_; }

  // Block index of each column of the stacked basis.
  const std::vector<std::size_t>& column_block() const { return column_block_; }
  Mat to_block_coords(const Mat& x) const;
  Mat from_block_coords(const Mat& c) const;

  // Σ_{i,j} symbol(i, j) e_i x e_j
  Mat apply_symbol(const Mat& x, const std::function<double(std::size_t, std::size_t)>& symbol) const;
  // Σ_k d_k^alpha e_k; alpha = 0 gives the support projection.
  Mat weight(double alpha) const;
  // max_k d_k^alpha / min_k d_k^alpha
  double condition(double alpha = 1.0) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<double> values_;
  std::vector<Mat> bases_;
  Mat stacked_;
  std::vector<std::size_t> column_block_;
};

// Density of a (not necessarily faithful) state φ(x) = tr(dx).
class Density {
 public:
  const Mat& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  // Eigenvalues after kernel clipping (ascending) with their eigenvectors.
  const HermitianSpectrum& spectrum() const { return spectrum_; }
  const BlockSpectrum& blocks() const { return blocks_; }
  Mat support() const { return blocks_.support(); }
  Mat kernel_projection() const { return identity(dim()) - support(); }
  Eigen::Index rank() const { return blocks_.rank(); }
  bool full_support() const { return blocks_.full_support(); }
  double cluster_tol() const { return cluster_tol_; }

 private:
  friend Density make_density(const Mat& a, double cluster_tol);

  Density(Mat matrix, HermitianSpectrum spectrum, BlockSpectrum blocks, double cluster_tol)
      : matrix_(std::move(matrix)),
        spectrum_(std::move(spectrum)),
        blocks_(std::move(blocks)),
        cluster_tol_(cluster_tol) {}

  Mat matrix_;
  HermitianSpectrum spectrum_;
  BlockSpectrum blocks_;
  double cluster_tol_;
};

// a / tr(a) with support and spectral blocks. Errors: ZeroTrace, NotPSD.
Density make_density(const Mat& a, double cluster_tol = kDefaultClusterTol);

// Merges eigenvalues whose relative gap is at most cluster_tol; each block
// value is the trace-weighted mean of its members.
BlockSpectrum spectral_blocks(const Density& d, double cluster_tol);

Mat power_weight(const Density& d, double alpha);

// Geometric-grid approximation d_ε with values λ_max(1+ε)^{-j} (renormalized),
// commuting with d and satisfying (1+ε)^{-1} d_ε ⪯ d ⪯ (1+ε) d_ε.
// Only the support is discretized; the kernel stays zero.
Density discretize(const Density& d, double eps);

}  // namespace nclp
