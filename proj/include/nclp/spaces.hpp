#pragma once

#include "nclp/density.hpp"
#include "nclp/matcore.hpp"
#include "nclp/pnorm.hpp"

namespace nclp {

enum class Side { Left, Right };
enum class Part { Upper, Lower };

// Exponent pair 1 ≤ q < p ≤ ∞ with 1/s = 1/q − 1/p.
class ExponentSpec {
 public:
  ExponentSpec(PNorm p, PNorm q);

  const PNorm& p() const { return p_; }
  const PNorm& q() const { return q_; }
  // 1/q − 1/p, the weight exponent of L^{r/c}_{p,q}.
  double weight_exponent() const { return alpha_; }
  // Finite since q < p strictly.
  double s() const { return 1.0 / alpha_; }

 private:
  PNorm p_;
  PNorm q_;
  double alpha_;
};

// left: ‖d^{1/q−1/p} x‖_q, right: ‖x d^{1/q−1/p}‖_q. A seminorm for singular d.
double weighted_norm(const Mat& x, const Density& d, const ExponentSpec& spec, Side side);

struct DeltaNorm {
  double value = 0.0;
  double left = 0.0;
  double right = 0.0;
  // Set when d is singular: the corner (1−e) · (1−e) is annihilated.
  bool seminorm = false;
};

DeltaNorm delta_norm_detail(const Mat& x, const Density& d, const ExponentSpec& spec);
// max of the two one-sided weighted norms.
double delta_norm(const Mat& x, const Density& d, const ExponentSpec& spec);

// max{ t^{1/p}‖x‖_p, t‖d^{1/p'}x‖_1, t‖x d^{1/p'}‖_1 }, p ≥ 2, t > 0.
double ptd_norm(const Mat& x, const Density& d, const PNorm& p, double t);

// |x|_s = ((x*x + xx*)/2)^{1/2}
Mat symmetric_modulus(const Mat& x);

// Triangular compression (i ≤ j upper, i > j lower), then the blockwise
// scalar weight d_i^alpha (left) or d_j^alpha (right), then ‖·‖_q.
double triangular_weighted_norm(const Mat& x, const BlockSpectrum& blocks, const PNorm& q, double alpha,
                                Part part, Side side);

}  // namespace nclp
