#pragma once

#include <Eigen/Dense>

namespace skel {

/// Ascending eigenvalues, orthonormal eigenvectors (columns) and residual norms.
struct SpectralResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd residuals;  ///< ||A v_i - lambda_i v_i||
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

namespace eigensolve {

enum class Method {
  Tridiagonal,  ///< Householder tridiagonalisation + implicit QR (Eigen)
  Jacobi,       ///< cyclic Jacobi rotations, reference algorithm
};

inline constexpr int kJacobiMaxSweeps = 30;

/// Throws ContractError when max|A - A^T| exceeds 1e-12 max|A| (or A is not square).
void require_symmetric(const Eigen::MatrixXd& a);

/// Full decomposition. Eigenvector signs are fixed so the largest-magnitude
/// component of each column is positive, making results deterministic.
SpectralResult eigh(const Eigen::MatrixXd& a, Method method = Method::Tridiagonal);

/// Eigenvalues only, ascending.
Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& a, Method method = Method::Tridiagonal);

Eigenpair top_eigenpair(const Eigen::MatrixXd& a);
Eigenpair bottom_eigenpair(const Eigen::MatrixXd& a);

double trace(const Eigen::MatrixXd& a);
double frobenius(const Eigen::MatrixXd& a);

/// Sum of |eigenvalues| of a symmetric matrix.
double trace_norm(const Eigen::MatrixXd& a);

}  // namespace eigensolve
}  // namespace skel
