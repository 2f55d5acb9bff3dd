#pragma once

#include <Eigen/Core>

#include "regretctl/block_matrix.hpp"

namespace regretctl {

// Lower-triangular D with positive diagonal and D * D^T = M.
// M must be symmetric (to 1e-12 relative) and positive definite; a
// non-positive pivot raises NumericalError naming the pivot index.
Eigen::MatrixXd chol_forward(const Eigen::MatrixXd& m);

// Lower-triangular E with positive diagonal and E^T * E = M. Computed by
// order-reversing M, forward-factoring, transposing and reversing back.
Eigen::MatrixXd chol_reverse(const Eigen::MatrixXd& m);

// Scalar lower-triangularity implies block lower-triangularity for any
// conforming partition, so the factors keep the input's partitions.
BlockMatrix chol_forward(const BlockMatrix& m);
BlockMatrix chol_reverse(const BlockMatrix& m);

// Symmetric PSD square root and inverse square root via eigendecomposition.
// Used only for identity checking (the theta/psi algebra); synthesis uses the
// triangular factors above.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m);
Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& m);

// Factor H with H^T * H = M for PSD M (eigenvalues below rel_tol * lambda_max
// are clamped to zero; eigenvalues below -rel_tol * lambda_max raise
// InputError). Returns a square factor with the same dimension as M.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m, double rel_tol = 1e-12);

// Triangular solves that keep exact zero fill: solve L * X = B, X * L = B and
// L^T * X = B for lower-triangular L.
Eigen::MatrixXd solve_lower_left(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& rhs);
Eigen::MatrixXd solve_lower_right(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& rhs);
Eigen::MatrixXd solve_lower_trans_left(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& rhs);

}  // namespace regretctl
