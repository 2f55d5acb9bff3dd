#pragma once

#include <Eigen/Core>

namespace regretctl {

enum class SpectralMode { SymmetricEig, Singular };

// Extremal eigen/singular pairs. For SymmetricEig, left == right vectors and
// min/max are the extreme eigenvalues; for Singular they are the extreme
// singular values with their left (u) and right (v) vectors.
struct SpectralExtremes {
  double min_value = 0.0;
  double max_value = 0.0;
  Eigen::VectorXd min_left;
  Eigen::VectorXd min_right;
  Eigen::VectorXd max_left;
  Eigen::VectorXd max_right;
};

SpectralExtremes spectral_extremes(const Eigen::MatrixXd& m, SpectralMode mode);

// Largest singular value. For large matrices this works on the Gram matrix of
// the smaller side, which is cheaper than a full SVD.
double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace regretctl
