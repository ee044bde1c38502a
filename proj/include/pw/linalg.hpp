/// @file linalg.hpp
/// @brief Small dense kernels: symmetric QR eigensolver, pivoted LU solves,
///        2-norm condition numbers and a complex nonsymmetric eigensolver.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace pw {

using cplx = std::complex<double>;

constexpr int kMaxDim = 16;

/// Stack-allocated dynamic-size matrices, n <= 16.
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using SmallCMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SmallCVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  int row;
  SingularMatrixError(const std::string& msg, int r) : std::runtime_error(msg), row(r) {}
};

struct SymEigen {
  SmallVec values;   ///< ascending
  SmallMat vectors;  ///< orthonormal columns
};

/// Householder tridiagonalisation + implicit QR with Wilkinson shifts.
/// Each eigenvector has its largest-magnitude entry positive.
SymEigen sym_eigen(const SmallMat& S);

SmallVec solve_lu(const SmallMat& A, const SmallVec& b);
SmallCVec solve_lu(const SmallCMat& A, const SmallCVec& b);

/// sigma_max / sigma_min from the eigenvalues of A^T A; +inf when singular.
double cond_2norm(const SmallMat& A);

struct ComplexEigen {
  SmallCVec values;
  SmallCMat vectors;  ///< unit 2-norm columns
};

/// Balance, Hessenberg reduction, shifted QR, triangular back-substitution.
ComplexEigen complex_eigen(const SmallCMat& A);

}  // namespace pw
