#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nclp/matcore.hpp"

namespace nclp {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
// Multipliers 0xD2511F53 / 0xCD9E8D57, Weyl key increments 0x9E3779B9 /
// 0xBB67AE85, ten rounds. Counter-based: output is a pure function of
// (counter, key), so streams reproduce across platforms and schedules.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Sequential draws from the Philox stream keyed by `seed`; `stream` occupies
// the upper half of the counter so independent sub-streams never overlap.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Box–Muller; no cached second variate, so draws depend only on position.
  double normal();
  // Standard complex Gaussian: (N + iN)/√2, E|z|² = 1.
  cplx complex_normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

// Derives the seed of trial `index` from a master seed.
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index);

Mat random_gaussian(Eigen::Index n, CounterRng& rng);
// (G + G*)/2, exactly Hermitian.
Mat random_hermitian(Eigen::Index n, CounterRng& rng);
// G G* / n
Mat random_psd(Eigen::Index n, CounterRng& rng);
Mat random_density(Eigen::Index n, CounterRng& rng);
// Haar unitary from the QR factorization of a Gaussian matrix.
Mat random_unitary(Eigen::Index n, CounterRng& rng);
// Trace-one density with log-uniform eigenvalues spanning exactly
// [λ_max / condition, λ_max] and Haar eigenvectors.
Mat random_density_with_condition(Eigen::Index n, double condition, CounterRng& rng);
// Density with `blocks` distinct eigenvalues of random multiplicities.
Mat random_block_density(Eigen::Index n, Eigen::Index blocks, double condition, CounterRng& rng);
// Random composition of n into `parts` positive ranks.
std::vector<Eigen::Index> random_composition(Eigen::Index n, Eigen::Index parts, CounterRng& rng);
// Convex combination of PSD rank-deficient pieces, rank = `rank`.
Mat random_psd_of_rank(Eigen::Index n, Eigen::Index rank, CounterRng& rng);

}  // namespace nclp
