#include "nclp/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nclp/error.hpp"

namespace nclp {

BlockSpectrum::BlockSpectrum(std::vector<double> values, std::vector<Mat> bases)
    : values_(std::move(values)), bases_(std::move(bases)) {
  if (values_.empty() || values_.size() != bases_.size()) {
    throw Error(ErrorCode::InvalidBlocks, "need one basis per block value and at least one block");
  }
  dim_ = bases_.front().rows();
  Eigen::Index total = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
      throw Error(ErrorCode::InvalidBlocks, "block values must be positive and finite");
    }
    if (k > 0 && !(values_[k] > values_[k - 1])) {
      throw Error(ErrorCode::InvalidBlocks, "block values must be strictly increasing");
    }
    if (bases_[k].rows() != dim_ || bases_[k].cols() < 1) {
      throw Error(ErrorCode::InvalidBlocks, "block basis has wrong shape");
    }
    total += bases_[k].cols();
  }
  if (total > dim_) throw Error(ErrorCode::InvalidBlocks, "block ranks exceed the dimension");
  stacked_.resize(dim_, total);
  Eigen::Index pos = 0;
  for (std::size_t k = 0; k < bases_.size(); ++k) {
    stacked_.middleCols(pos, bases_[k].cols()) = bases_[k];
    for (Eigen::Index c = 0; c < bases_[k].cols(); ++c) column_block_.push_back(k);
    pos += bases_[k].cols();
  }
  const double gram_err = (stacked_.adjoint() * stacked_ - Mat::Identity(total, total)).cwiseAbs().maxCoeff();
  if (gram_err > 1e-10) throw Error(ErrorCode::InvalidBlocks, "block projections are not orthogonal");
}

BlockSpectrum BlockSpectrum::from_projections(std::vector<double> values, const std::vector<Mat>& projections) {
  std::vector<Mat> bases;
  for (const Mat& e : projections) {
    validate_square(e, "projection");
    if ((e * e - e).cwiseAbs().maxCoeff() > 1e-10 || !is_hermitian(e)) {
      throw Error(ErrorCode::InvalidBlocks, "block is not an orthogonal projection");
    }
    const HermitianSpectrum s = eigh(e);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
      if (s.values(i) > 0.5) cols.push_back(i);
    if (cols.empty()) throw Error(ErrorCode::InvalidBlocks, "zero projection");
    Mat w(e.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) w.col(static_cast<Eigen::Index>(c)) = s.vectors.col(cols[c]);
    bases.push_back(std::move(w));
  }
  return BlockSpectrum(std::move(values), std::move(bases));
}

BlockSpectrum BlockSpectrum::coordinate(const std::vector<Eigen::Index>& ranks, std::vector<double> values) {
  Eigen::Index n = 0;
  for (const auto r : ranks) n += r;
  std::vector<Mat> bases;
  Eigen::Index pos = 0;
  for (const auto r : ranks) {
    if (r < 1) throw Error(ErrorCode::InvalidBlocks, "block ranks must be positive");
    Mat w = Mat::Zero(n, r);
    w.middleRows(pos, r).setIdentity();
    bases.push_back(std::move(w));
    pos += r;
  }
  return BlockSpectrum(std::move(values), std::move(bases));
}

std::vector<Eigen::Index> BlockSpectrum::ranks() const {
  std::vector<Eigen::Index> r;
  for (const Mat& b : bases_) r.push_back(b.cols());
  return r;
}

Mat BlockSpectrum::projection(std::size_t k) const { return bases_.at(k) * bases_.at(k).adjoint(); }

std::vector<Mat> BlockSpectrum::projections() const {
  std::vector<Mat> out;
  for (std::size_t k = 0; k < size(); ++k) out.push_back(projection(k));
  return out;
}

Mat BlockSpectrum::support() const { return stacked_ * stacked_.adjoint(); }

Mat BlockSpectrum::to_block_coords(const Mat& x) const {
  require_same_dim(x, Mat(dim_, dim_));
  return stacked_.adjoint() * x * stacked_;
}

Mat BlockSpectrum::from_block_coords(const Mat& c) const { return stacked_ * c * stacked_.adjoint(); }

Mat BlockSpectrum::apply_symbol(const Mat& x,
                                const std::function<double(std::size_t, std::size_t)>& symbol) const {
  const std::size_t m = size();
  Eigen::MatrixXd table(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = symbol(i, j);
  Mat c = to_block_coords(x);
  for (Eigen::Index col = 0; col < c.cols(); ++col) {
    const auto bj = static_cast<Eigen::Index>(column_block_[static_cast<std::size_t>(col)]);
    for (Eigen::Index row = 0; row < c.rows(); ++row) {
      c(row, col) *= table(static_cast<Eigen::Index>(column_block_[static_cast<std::size_t>(row)]), bj);
    }
  }
  return from_block_coords(c);
}

Mat BlockSpectrum::weight(double alpha) const {
  RealVec diag(rank());
  for (Eigen::Index c = 0; c < rank(); ++c) diag(c) = std::pow(values_[column_block_[static_cast<std::size_t>(c)]], alpha);
  return stacked_ * diag.cast<cplx>().asDiagonal() * stacked_.adjoint();
}

double BlockSpectrum::condition(double alpha) const {
  if (values_.empty()) return 1.0;
  const double a = std::pow(values_.front(), alpha);
  const double b = std::pow(values_.back(), alpha);
  return std::max(a, b) / std::min(a, b);
}

namespace {

BlockSpectrum cluster(const HermitianSpectrum& spec, double cluster_tol) {
  std::vector<double> values;
  std::vector<Mat> bases;
  const Eigen::Index n = spec.values.size();
  Eigen::Index start = -1;
  auto flush = [&](Eigen::Index first, Eigen::Index last) {
    double sum = 0.0;
    for (Eigen::Index i = first; i <= last; ++i) sum += spec.values(i);
    values.push_back(sum / static_cast<double>(last - first + 1));
    bases.push_back(spec.vectors.middleCols(first, last - first + 1));
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    if (spec.values(i) <= 0.0) continue;
    if (start < 0) {
      start = i;
      continue;
    }
    if (spec.values(i) - spec.values(i - 1) > cluster_tol * spec.values(i)) {
      flush(start, i - 1);
      start = i;
    }
  }
  if (start < 0) throw Error(ErrorCode::ZeroTrace, "density has empty support");
  flush(start, n - 1);
  return BlockSpectrum(std::move(values), std::move(bases));
}

}  // namespace

Density make_density(const Mat& a, double cluster_tol) {
  if (!(cluster_tol >= 0.0 && cluster_tol < 1.0)) {
    throw Error(ErrorCode::DomainError, "cluster tolerance must lie in [0, 1)");
  }
  HermitianSpectrum spec = eigh(a);
  const double scale = spec.values.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw Error(ErrorCode::ZeroTrace, "zero matrix");
  if (spec.values.minCoeff() < -1e-10 * scale) throw Error(ErrorCode::NotPSD, "negative eigenvalue");
  const double trace = a.trace().real();
  if (!(trace > 0.0)) throw Error(ErrorCode::ZeroTrace, "trace must be positive");
  Mat matrix = (a + a.adjoint()) * (0.5 / trace);
  const double lambda_max = spec.values.maxCoeff();
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    spec.values(i) = spec.values(i) <= kKernelThreshold * lambda_max ? 0.0 : spec.values(i) / trace;
  }
  BlockSpectrum blocks = cluster(spec, cluster_tol);
  return Density(std::move(matrix), std::move(spec), std::move(blocks), cluster_tol);
}

BlockSpectrum spectral_blocks(const Density& d, double cluster_tol) {
  if (!(cluster_tol >= 0.0 && cluster_tol < 1.0)) {
    throw Error(ErrorCode::DomainError, "cluster tolerance must lie in [0, 1)");
  }
  return cluster(d.spectrum(), cluster_tol);
}

Mat power_weight(const Density& d, double alpha) { return d.blocks().weight(alpha); }

Density discretize(const Density& d, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive");
  const HermitianSpectrum& spec = d.spectrum();
  const double lambda_max = spec.values.maxCoeff();
  const double log_ratio = std::log1p(eps);
  RealVec grid = RealVec::Zero(spec.values.size());
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double lambda = spec.values(i);
    if (lambda <= 0.0) continue;
    // Smallest grid value ≥ λ, so λ ≤ g < (1+ε)λ.
    auto j = static_cast<long>(std::floor(std::log(lambda_max / lambda) / log_ratio));
    double g = lambda_max * std::pow(1.0 + eps, -static_cast<double>(j));
    if (std::abs(g - lambda) <= 1e-12 * lambda) {
      g = lambda;
    } else if (g < lambda) {
      g = lambda_max * std::pow(1.0 + eps, -static_cast<double>(--j));
    } else {
      const double finer = lambda_max * std::pow(1.0 + eps, -static_cast<double>(j + 1));
      if (finer >= lambda) g = finer;
    }
    grid(i) = g;
  }
  // Σ g ∈ [1, 1+ε], so dividing by it keeps the (1+ε) sandwich intact.
  const Mat m = spec.vectors * grid.cast<cplx>().asDiagonal() * spec.vectors.adjoint();
  return make_density(m, d.cluster_tol());
}

}  // namespace nclp
