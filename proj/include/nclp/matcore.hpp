#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "nclp/pnorm.hpp"

namespace nclp {

using cplx = std::complex<double>;
// Dense complex n×n matrix; the ambient element of L_p(M_n).
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

// ‖a − a*‖_∞ ≤ kHermitianTol · max(1, ‖a‖_∞)
inline constexpr double kHermitianTol = 1e-10;
// An eigenvalue λ counts as zero when |λ| ≤ kKernelThreshold · max|λ|.
inline constexpr double kKernelThreshold = 1e-12;

// Throws DimMismatch for empty/non-square input and DomainError for NaN/Inf.
void validate_square(const Mat& x, const char* what = "matrix");
void require_same_dim(const Mat& x, const Mat& y);

double hermitian_residual(const Mat& a);
bool is_hermitian(const Mat& a);

struct HermitianSpectrum {
  RealVec values;  // ascending
  Mat vectors;     // columns are orthonormal eigenvectors
};

// Checks Hermiticity (NotHermitian), symmetrizes and diagonalizes.
HermitianSpectrum eigh(const Mat& a);

// U f(Λ) U* with kernel clipping: eigenvalues at or below the kernel
// threshold are mapped to f(0) when finite and dropped otherwise.
Mat apply_spectral(const HermitianSpectrum& spec, const std::function<double(double)>& f);
Mat func_calculus(const Mat& a, const std::function<double(double)>& f);

// a^alpha for PSD a; negative alpha is a pseudo-power on the support.
Mat psd_power(const Mat& a, double alpha);
Mat positive_part(const Mat& hermitian);
Mat negative_part(const Mat& hermitian);
Mat spectral_abs(const Mat& hermitian);

double min_eigenvalue(const Mat& hermitian);
double max_eigenvalue(const Mat& hermitian);
// Smallest eigenvalue ≥ −rel_tol · max(|λ|).
bool is_psd(const Mat& a, double rel_tol = 1e-10);

RealVec singular_values(const Mat& x);
double schatten_norm_of_singular_values(const RealVec& sigma, const PNorm& p);
double schatten_norm(const Mat& x, const PNorm& p);
inline double schatten_norm(const Mat& x, double p) { return schatten_norm(x, PNorm(p)); }
double operator_norm(const Mat& x);

// tr(xy)
cplx trace_pair(const Mat& x, const Mat& y);

// z with ‖z‖_{p'} = 1 and Re tr(z* y) = ‖y‖_p; zero for y = 0.
Mat norming_functional(const Mat& y, const PNorm& p);

Mat identity(Eigen::Index n);

}  // namespace nclp
