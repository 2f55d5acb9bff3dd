#include "regretctl/parrott.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <string>

#include "regretctl/errors.hpp"
#include "regretctl/spectral.hpp"

namespace regretctl {

namespace detail {

Eigen::MatrixXd parrott_central(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                const Eigen::MatrixXd& c, double gamma) {
  const Eigen::Index s = c.rows();
  const Eigen::Index r = b.cols();
  if (s == 0 || r == 0) return Eigen::MatrixXd::Zero(s, r);
  if (a.rows() == 0 || a.cols() == 0) return Eigen::MatrixXd::Zero(s, r);

  const Eigen::Index q = a.cols();
  Eigen::MatrixXd gap = gamma * gamma * Eigen::MatrixXd::Identity(q, q) - a.transpose() * a;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gap);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * gamma * gamma) {
    throw NumericalError(
        "parrott_complete: gamma^2 I - A^T A is numerically singular; "
        "increase the gamma margin");
  }
  return -c * ldlt.solve(a.transpose() * b);
}

}  // namespace detail

ParrottResult parrott_complete(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               const Eigen::MatrixXd& c, double gamma) {
  if (!(gamma > 0.0)) throw InputError("parrott_complete: gamma must be positive");
  if (a.rows() != b.rows()) {
    throw StructuralError("parrott_complete: A and B row counts differ");
  }
  if (a.cols() != c.cols()) {
    throw StructuralError("parrott_complete: A and C column counts differ");
  }

  Eigen::MatrixXd row_border(a.rows(), a.cols() + b.cols());
  row_border << a, b;
  Eigen::MatrixXd col_border(a.rows() + c.rows(), a.cols());
  col_border << a, c;

  ParrottResult out;
  out.bound = std::max(spectral_norm(row_border), spectral_norm(col_border));
  if (out.bound > gamma * (1.0 + 1e-9)) {
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  out.completion = detail::parrott_central(a, b, c, gamma);
  return out;
}

}  // namespace regretctl
