#include "nclp/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nclp/error.hpp"

namespace nclp {

void validate_square(const Mat& x, const char* what) {
  if (x.rows() < 1 || x.rows() != x.cols()) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + " must be square with dim >= 1");
  }
  if (!x.allFinite()) throw Error(ErrorCode::DomainError, std::string(what) + " has non-finite entries");
}

void require_same_dim(const Mat& x, const Mat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::DimMismatch, "dimension mismatch: " + std::to_string(x.rows()) + " vs " +
                                            std::to_string(y.rows()));
  }
}

double hermitian_residual(const Mat& a) {
  return operator_norm(a - a.adjoint());
}

bool is_hermitian(const Mat& a) {
  if (a.rows() != a.cols()) return false;
  return hermitian_residual(a) <= kHermitianTol * std::max(1.0, operator_norm(a));
}

HermitianSpectrum eigh(const Mat& a) {
  validate_square(a);
  if (!is_hermitian(a)) throw Error(ErrorCode::NotHermitian, "symmetry residual exceeds tolerance");
  const Mat sym = (a + a.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::DomainError, "eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat apply_spectral(const HermitianSpectrum& spec, const std::function<double(double)>& f) {
  const Eigen::Index n = spec.values.size();
  const double scale = n == 0 ? 0.0 : spec.values.cwiseAbs().maxCoeff();
  const double cutoff = kKernelThreshold * scale;
  const double f0 = f(0.0);
  RealVec mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = spec.values(i);
    if (std::abs(lambda) <= cutoff) {
      mapped(i) = std::isfinite(f0) ? f0 : 0.0;
      continue;
    }
    const double v = f(lambda);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::DomainError, "function undefined at eigenvalue " + std::to_string(lambda));
    }
    mapped(i) = v;
  }
  return spec.vectors * mapped.cast<cplx>().asDiagonal() * spec.vectors.adjoint();
}

Mat func_calculus(const Mat& a, const std::function<double(double)>& f) {
  return apply_spectral(eigh(a), f);
}

Mat psd_power(const Mat& a, double alpha) {
  return func_calculus(a, [alpha](double t) {
    if (t == 0.0) return alpha > 0.0 ? 0.0 : HUGE_VAL;
    if (t < 0.0) return std::nan("");
    return std::pow(t, alpha);
  });
}

Mat positive_part(const Mat& hermitian) {
  return func_calculus(hermitian, [](double t) { return t > 0.0 ? t : 0.0; });
}

Mat negative_part(const Mat& hermitian) {
  return func_calculus(hermitian, [](double t) { return t < 0.0 ? -t : 0.0; });
}

Mat spectral_abs(const Mat& hermitian) {
  return func_calculus(hermitian, [](double t) { return std::abs(t); });
}

double min_eigenvalue(const Mat& hermitian) { return eigh(hermitian).values.minCoeff(); }

double max_eigenvalue(const Mat& hermitian) { return eigh(hermitian).values.maxCoeff(); }

bool is_psd(const Mat& a, double rel_tol) {
  if (!is_hermitian(a)) return false;
  const RealVec values = eigh(a).values;
  const double scale = values.cwiseAbs().maxCoeff();
  return values.minCoeff() >= -rel_tol * scale;
}

RealVec singular_values(const Mat& x) {
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues();
}

double schatten_norm_of_singular_values(const RealVec& sigma, const PNorm& p) {
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.maxCoeff();
  if (top == 0.0) return 0.0;
  if (p.is_infinite()) return top;
  const double exponent = p.value();
  if (exponent == 1.0) return sigma.sum();
  if (exponent == 2.0) return sigma.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) acc += std::pow(sigma(i) / top, exponent);
  return top * std::pow(acc, 1.0 / exponent);
}

double schatten_norm(const Mat& x, const PNorm& p) {
  if (p.value() == 2.0) return x.norm();
  return schatten_norm_of_singular_values(singular_values(x), p);
}

double operator_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  return singular_values(x).maxCoeff();
}

cplx trace_pair(const Mat& x, const Mat& y) {
  require_same_dim(x, y);
  // Σ_ij x_ij y_ji
  return (x.array() * y.transpose().array()).sum();
}

Mat norming_functional(const Mat& y, const PNorm& p) {
  Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVec& sigma = svd.singularValues();
  const Eigen::Index n = sigma.size();
  RealVec weights = RealVec::Zero(n);
  const double top = n == 0 ? 0.0 : sigma.maxCoeff();
  if (top == 0.0) return Mat::Zero(y.rows(), y.cols());
  if (p.is_infinite()) {
    weights(0) = 1.0;  // Jacobi SVD sorts singular values descending
  } else if (p.value() == 1.0) {
    for (Eigen::Index i = 0; i < n; ++i) weights(i) = sigma(i) > kKernelThreshold * top ? 1.0 : 0.0;
  } else {
    const double q = p.value();
    const double norm = schatten_norm_of_singular_values(sigma, p);
    for (Eigen::Index i = 0; i < n; ++i) weights(i) = std::pow(sigma(i) / norm, q - 1.0);
  }
  return svd.matrixU() * weights.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
}

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

}  // namespace nclp
