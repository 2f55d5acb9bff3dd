#include "regretctl/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "regretctl/errors.hpp"

namespace regretctl {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* who) {
  if (!m.allFinite()) throw InputError(std::string(who) + ": non-finite entries");
}

// Fix an overall sign so identical inputs give identical vectors across
// library versions: largest-magnitude component made positive.
void canonicalize(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      imax = i;
    }
  }
  if (v.size() > 0 && v(imax) < 0.0) v = -v;
}

}  // namespace

SpectralExtremes spectral_extremes(const Eigen::MatrixXd& m, SpectralMode mode) {
  require_finite(m, "spectral_extremes");
  SpectralExtremes out;
  if (mode == SpectralMode::SymmetricEig) {
    if (m.rows() != m.cols()) {
      throw StructuralError("spectral_extremes: symmetric mode needs a square matrix");
    }
    const double scale = m.norm();
    if ((m - m.transpose()).norm() > 1e-10 * std::max(scale, 1.0)) {
      throw StructuralError("spectral_extremes: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
    if (eig.info() != Eigen::Success) {
      throw NumericalError("spectral_extremes: eigendecomposition failed");
    }
    const Eigen::Index n = m.rows();
    out.min_value = eig.eigenvalues()(0);
    out.max_value = eig.eigenvalues()(n - 1);
    out.min_left = eig.eigenvectors().col(0);
    out.max_left = eig.eigenvectors().col(n - 1);
    canonicalize(out.min_left);
    canonicalize(out.max_left);
    out.min_right = out.min_left;
    out.max_right = out.max_left;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index k = svd.singularValues().size();
    if (k == 0) throw StructuralError("spectral_extremes: empty matrix");
    out.max_value = svd.singularValues()(0);
    out.min_value = svd.singularValues()(k - 1);
    out.max_left = svd.matrixU().col(0);
    out.max_right = svd.matrixV().col(0);
    out.min_left = svd.matrixU().col(k - 1);
    out.min_right = svd.matrixV().col(k - 1);
    canonicalize(out.max_right);
    if (out.max_right.dot(svd.matrixV().col(0)) < 0.0) out.max_left = -out.max_left;
    canonicalize(out.min_right);
    if (out.min_right.dot(svd.matrixV().col(k - 1)) < 0.0) out.min_left = -out.min_left;
  }
  return out;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  require_finite(m, "spectral_norm");
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() <= 24 && m.cols() <= 24) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
  }
  const bool slim = m.cols() <= m.rows();
  Eigen::MatrixXd gram = slim ? Eigen::MatrixXd(m.transpose() * m)
                              : Eigen::MatrixXd(m * m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("spectral_norm: eigendecomposition failed");
  }
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace regretctl
