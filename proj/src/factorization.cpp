#include "regretctl/factorization.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "regretctl/errors.hpp"

namespace regretctl {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw StructuralError(std::string(who) + ": matrix is not square");
  }
  const double scale = m.norm();
  if ((m - m.transpose()).norm() > 1e-12 * std::max(scale, 1.0)) {
    throw StructuralError(std::string(who) + ": matrix is not symmetric");
  }
}

// Unblocked lower Cholesky; reports the failing pivot index on breakdown.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sym, const char* who) {
  const Eigen::Index n = sym.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = sym(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= d(j, k) * d(j, k);
    if (!(pivot > 0.0)) {
      throw NumericalError(std::string(who) + ": non-positive pivot at index " +
                           std::to_string(j) + " (matrix is not positive definite)");
    }
    d(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = sym(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= d(i, k) * d(j, k);
      d(i, j) = s / d(j, j);
    }
  }
  return d;
}

}  // namespace

Eigen::MatrixXd chol_forward(const Eigen::MatrixXd& m) {
  require_symmetric(m, "chol_forward");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return cholesky_lower(sym, "chol_forward");
}

Eigen::MatrixXd chol_reverse(const Eigen::MatrixXd& m) {
  require_symmetric(m, "chol_reverse");
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd rev(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rev(i, j) = m(n - 1 - i, n - 1 - j);
  }
  rev = 0.5 * (rev + rev.transpose()).eval();
  const Eigen::MatrixXd d = cholesky_lower(rev, "chol_reverse");
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  // e = P * d^T * P with P the order-reversal permutation; lower triangular.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) e(i, j) = d(n - 1 - j, n - 1 - i);
  }
  return e;
}

BlockMatrix chol_forward(const BlockMatrix& m) {
  if (!(m.rows == m.cols)) {
    throw StructuralError("chol_forward: row/column partitions differ");
  }
  return BlockMatrix(m.rows, m.cols, chol_forward(m.data));
}

BlockMatrix chol_reverse(const BlockMatrix& m) {
  if (!(m.rows == m.cols)) {
    throw StructuralError("chol_reverse: row/column partitions differ");
  }
  return BlockMatrix(m.rows, m.cols, chol_reverse(m.data));
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_of(const Eigen::MatrixXd& m,
                                                      const char* who) {
  require_symmetric(m, who);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  if (eig.info() != Eigen::Success) {
    throw NumericalError(std::string(who) + ": eigendecomposition failed");
  }
  return eig;
}

}  // namespace

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  auto eig = eig_of(m, "symmetric_sqrt");
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& m) {
  auto eig = eig_of(m, "symmetric_inv_sqrt");
  const double lmax = eig.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (!(lam(i) > 1e-14 * std::max(lmax, 1.0))) {
      throw NumericalError("symmetric_inv_sqrt: matrix is numerically singular");
    }
    lam(i) = 1.0 / std::sqrt(lam(i));
  }
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m, double rel_tol) {
  auto eig = eig_of(m, "psd_factor");
  const double lmax = eig.eigenvalues().size() > 0
                          ? std::max(eig.eigenvalues().maxCoeff(), 0.0)
                          : 0.0;
  const double floor = rel_tol * std::max(lmax, 1.0);
  Eigen::VectorXd lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -floor) {
      throw InputError("psd_factor: matrix has a negative eigenvalue (" +
                       std::to_string(lam(i)) + ")");
    }
    lam(i) = lam(i) > floor ? std::sqrt(lam(i)) : 0.0;
  }
  return lam.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd solve_lower_left(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& rhs) {
  return lower.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::MatrixXd solve_lower_right(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& rhs) {
  // X * L = B  <=>  L^T * X^T = B^T
  return lower.transpose().triangularView<Eigen::Upper>().solve(rhs.transpose()).transpose();
}

Eigen::MatrixXd solve_lower_trans_left(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& rhs) {
  return lower.transpose().triangularView<Eigen::Upper>().solve(rhs);
}

}  // namespace regretctl
