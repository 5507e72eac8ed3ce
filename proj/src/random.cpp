#include "nclp/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nclp/error.hpp"

namespace nclp {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

std::uint64_t CounterRng::next_u64() {
  if (used_ >= 4) {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                            key_);
    ++block_;
    used_ = 0;
  }
  const std::uint64_t lo = buffer_[used_];
  const std::uint64_t hi = buffer_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

double CounterRng::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
  if (span == 0) return static_cast<std::int64_t>(next_u64());
  // Rejection keeps the distribution exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return lo + static_cast<std::int64_t>(v % span);
}

double CounterRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5EEDu, 0x5EEDu},
      {static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)});
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Mat random_gaussian(Eigen::Index n, CounterRng& rng) {
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  return g;
}

Mat random_hermitian(Eigen::Index n, CounterRng& rng) {
  const Mat g = random_gaussian(n, rng);
  Mat h = (g + g.adjoint()) * 0.5;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) h(j, i) = std::conj(h(i, j));
  return h;
}

Mat random_psd(Eigen::Index n, CounterRng& rng) {
  const Mat g = random_gaussian(n, rng);
  Mat a = g * g.adjoint() / static_cast<double>(n);
  return (a + a.adjoint()) * 0.5;
}

Mat random_density(Eigen::Index n, CounterRng& rng) {
  const Mat a = random_psd(n, rng);
  return a / a.trace().real();
}

Mat random_unitary(Eigen::Index n, CounterRng& rng) {
  const Mat g = random_gaussian(n, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

namespace {

Mat assemble_density(const RealVec& eigenvalues, const Mat& u) {
  Mat d = u * eigenvalues.cast<cplx>().asDiagonal() * u.adjoint();
  d = (d + d.adjoint()) * 0.5;
  return d / d.trace().real();
}

}  // namespace

Mat random_density_with_condition(Eigen::Index n, double condition, CounterRng& rng) {
  if (condition < 1.0) throw Error(ErrorCode::DomainError, "condition must be >= 1");
  RealVec values(n);
  const double log_c = std::log(condition);
  for (Eigen::Index i = 0; i < n; ++i) values(i) = std::exp(-log_c * rng.uniform());
  values(0) = 1.0;
  if (n > 1) values(n - 1) = 1.0 / condition;
  return assemble_density(values, random_unitary(n, rng));
}

std::vector<Eigen::Index> random_composition(Eigen::Index n, Eigen::Index parts, CounterRng& rng) {
  parts = std::clamp<Eigen::Index>(parts, 1, n);
  std::vector<Eigen::Index> cuts;
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i + 1 < n; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  // Partial Fisher–Yates for parts − 1 distinct cut points.
  for (Eigen::Index k = 0; k + 1 < parts; ++k) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(k, static_cast<std::int64_t>(pool.size()) - 1));
    std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
    cuts.push_back(pool[static_cast<std::size_t>(k)]);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Eigen::Index> ranks;
  Eigen::Index prev = 0;
  for (const auto c : cuts) {
    ranks.push_back(c - prev);
    prev = c;
  }
  ranks.push_back(n - prev);
  return ranks;
}

Mat random_block_density(Eigen::Index n, Eigen::Index blocks, double condition, CounterRng& rng) {
  const auto ranks = random_composition(n, blocks, rng);
  const auto m = static_cast<Eigen::Index>(ranks.size());
  RealVec levels(m);
  const double log_c = std::log(condition);
  for (Eigen::Index k = 0; k < m; ++k) levels(k) = std::exp(-log_c * rng.uniform());
  levels(0) = 1.0;
  if (m > 1) levels(m - 1) = 1.0 / condition;
  RealVec values(n);
  Eigen::Index pos = 0;
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index r = 0; r < ranks[static_cast<std::size_t>(k)]; ++r) values(pos++) = levels(k);
  return assemble_density(values, random_unitary(n, rng));
}

Mat random_psd_of_rank(Eigen::Index n, Eigen::Index rank, CounterRng& rng) {
  Mat g(n, rank);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
  Mat a = g * g.adjoint();
  return (a + a.adjoint()) * 0.5;
}

}  // namespace nclp
