#include "nclp/triangular.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "nclp/error.hpp"
#include "nclp/random.hpp"

namespace nclp {

Mat triangular_project(const Mat& x, const BlockSpectrum& blocks) {
  validate_square(x);
  return blocks.apply_symbol(x, [](std::size_t i, std::size_t j) { return i <= j ? 1.0 : 0.0; });
}

Mat triangular_complement(const Mat& x, const BlockSpectrum& blocks) { return x - triangular_project(x, blocks); }

BlockMap::BlockMap(BlockSpectrum blocks, Eigen::MatrixXd symbol)
    : blocks_(std::move(blocks)), symbol_(std::move(symbol)) {
  const auto m = static_cast<Eigen::Index>(blocks_.size());
  if (symbol_.rows() != m || symbol_.cols() != m) {
    throw Error(ErrorCode::DimMismatch, "symbol table must be m x m for m blocks");
  }
  if (!symbol_.allFinite()) throw Error(ErrorCode::SymbolUndefined, "symbol table has non-finite entries");
}

BlockMap BlockMap::triangular(BlockSpectrum blocks) {
  const auto m = static_cast<Eigen::Index>(blocks.size());
  Eigen::MatrixXd symbol = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) symbol(i, j) = 1.0;
  return BlockMap(std::move(blocks), std::move(symbol));
}

Mat BlockMap::operator()(const Mat& x) const {
  return blocks_.apply_symbol(x, [this](std::size_t i, std::size_t j) {
    return symbol_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

LinearMap BlockMap::as_linear_map() const {
  // Real symbols make a block map self-adjoint for the trace pairing.
  auto self = std::make_shared<BlockMap>(*this);
  auto apply = [self](const Mat& x) { return (*self)(x); };
  return {apply, apply};
}

namespace {

double ratio(const LinearMap& map, const Mat& x, const PNorm& p) {
  const double denom = schatten_norm(x, p);
  if (denom == 0.0) return 0.0;
  return schatten_norm(map.apply(x), p) / denom;
}

Mat normalized(const Mat& x, const PNorm& p) {
  const double n = schatten_norm(x, p);
  return n > 0.0 ? Mat(x / n) : x;
}

double single_trial(const LinearMap& map, const PNorm& p, Eigen::Index dim, std::uint64_t seed,
                    const NormEstimateOptions& opt) {
  CounterRng rng(seed);
  Mat x = normalized(random_gaussian(dim, rng), p);
  double best = ratio(map, x, p);
  double step = opt.step;
  int rejections = 0;
  for (int it = 0; it < opt.iterations; ++it) {
    const Mat direction = normalized(random_gaussian(dim, rng), p);
    const Mat candidate = normalized(x + step * direction, p);
    const double r = ratio(map, candidate, p);
    if (r > best) {
      best = r;
      x = candidate;
      rejections = 0;
    } else if (++rejections >= opt.rejections_before_decay) {
      step *= opt.decay;
      rejections = 0;
    }
  }
  if (map.adjoint) {
    const PNorm dual = p.conjugate();
    for (int it = 0; it < opt.power_iterations; ++it) {
      const Mat y = map.apply(x);
      const Mat w = map.adjoint(norming_functional(y, p));
      const Mat candidate = normalized(norming_functional(w, dual), p);
      const double r = ratio(map, candidate, p);
      if (!(r > best * (1.0 + 1e-15))) break;
      best = r;
      x = candidate;
    }
  }
  return best;
}

}  // namespace

double operator_norm_estimate(const LinearMap& map, const PNorm& p, Eigen::Index dim, int trials,
                              std::uint64_t seed, const NormEstimateOptions& options) {
  if (trials < 1) throw Error(ErrorCode::DomainError, "trials must be >= 1");
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dim must be >= 1");
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    best = std::max(best, single_trial(map, p, dim, sub_seed(seed, static_cast<std::uint64_t>(t)), options));
  }
  return best;
}

double operator_norm_estimate(const BlockMap& map, const PNorm& p, int trials, std::uint64_t seed,
                              const NormEstimateOptions& options) {
  return operator_norm_estimate(map.as_linear_map(), p, map.blocks().dim(), trials, seed, options);
}

}  // namespace nclp
