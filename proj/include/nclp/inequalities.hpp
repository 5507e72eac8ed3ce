#pragma once

#include <array>

#include "nclp/density.hpp"
#include "nclp/matcore.hpp"
#include "nclp/pnorm.hpp"
#include "nclp/report.hpp"

namespace nclp {

// ‖a+x‖_p^p − ‖a‖_p^p ≤ p 2^{p−1} max{‖a^{p−1}x‖_1, ‖x‖_p^p} for PSD a, x and
// 2 ≤ p < ∞. p = 2 is accepted and flagged with the extra "p_equals_2".
// Tolerance 1e-9 · max(1, rhs). Errors: BadExponents, NotPSD.
CheckReport check_diff_inequality(const Mat& a, const Mat& x, const PNorm& p);

// tr((a+x)^p) − tr(a^p) against p ∫_0^1 tr((a+sx)^{p−1} x) ds with a
// 32-node Gauss–Legendre rule; relative tolerance 1e-7.
CheckReport check_integral_identity(const Mat& a, const Mat& x, const PNorm& p);

// For 2 ≤ p ≤ 3: lhs ≤ p(2^{p−1}−1)/(p−1) · (tr(a^{p−1}x) + tr(x^p)).
CheckReport check_operator_convex_bound(const Mat& a, const Mat& x, const PNorm& p);

// For commuting a, x: lhs ≤ (2^p − 1) max{tr(a^{p−1}x), tr(x^p)}.
// Errors: DomainError when a and x do not commute.
CheckReport check_commutative_bound(const Mat& a, const Mat& x, const PNorm& p);

// ‖a^η b^η‖_{q/η} ≤ ‖ab‖_q^η for PSD a, b and 0 < η < 1; 1e-10 relative.
CheckReport check_araki_kosaki(const Mat& a, const Mat& b, const PNorm& q, double eta);

// x = Σ_k i^k x_k with x0 = (Re x)_+, x1 = (Im x)_+, x2 = (Re x)_−, x3 = (Im x)_−.
std::array<Mat, 4> positive_split(const Mat& x);

// Central difference of f(s) = tr((a+sx)^p) against p tr((a+sx)^{p−1}x);
// passes iff |lhs − rhs| ≤ 1e-5 · max(1, |rhs|). Errors: NotPSD, BadExponents.
CheckReport check_derivative(const Mat& a, const Mat& x, const PNorm& p, double s, double h = 1e-4);

// max_k ‖x_k‖_{p,t,d} against ‖x‖_{p,t,d}, 1e-10 relative; also records the
// resummation error of the split.
CheckReport check_positive_split(const Mat& x, const Density& d, const PNorm& p, double t);

}  // namespace nclp
