#include "regretctl/controller.hpp"

#include <Eigen/LU>

#include "regretctl/errors.hpp"

namespace regretctl {

std::string to_string(ControllerOrigin origin) {
  switch (origin) {
    case ControllerOrigin::H2Noncausal: return "h2_noncausal";
    case ControllerOrigin::H2Causal: return "h2_causal";
    case ControllerOrigin::RegretOptimal: return "regret_optimal";
    case ControllerOrigin::Custom: return "custom";
  }
  return "custom";
}

ControllerOrigin origin_from_string(const std::string& name) {
  if (name == "h2_noncausal") return ControllerOrigin::H2Noncausal;
  if (name == "h2_causal") return ControllerOrigin::H2Causal;
  if (name == "regret_optimal") return ControllerOrigin::RegretOptimal;
  if (name == "custom") return ControllerOrigin::Custom;
  throw InputError("unknown controller origin '" + name + "'");
}

void Controller::check_causality_consistent() const {
  if (causality == Causality::Causal && !youla.is_causal()) {
    throw StructuralError("Controller: declared causal but Q has anticausal blocks");
  }
}

BlockMatrix Controller::feedback(const LiftedSystem& lift) const {
  return feedback_from_youla(youla, lift.j);
}

namespace {

void require_conforming(const BlockMatrix& q, const BlockMatrix& j, const char* who) {
  if (q.data.cols() != j.data.rows() || q.data.rows() != j.data.cols()) {
    throw StructuralError(std::string(who) + ": Q and J dimensions do not conform");
  }
}

}  // namespace

namespace {

// When lhs is unit lower triangular (the causal case) triangular solves keep
// the exact zero pattern of causal results; otherwise fall back to LU.
bool exactly_lower_triangular(const Eigen::MatrixXd& m) {
  return m.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0);
}

// X = lhs^-1 * R.
Eigen::MatrixXd solve_on_left(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& r,
                              const char* who) {
  if (exactly_lower_triangular(lhs)) {
    return lhs.triangularView<Eigen::Lower>().solve(r);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible()) {
    throw NumericalError(std::string(who) + ": resolvent is singular");
  }
  return lu.solve(r);
}

// X = R * lhs^-1, via lhs^T X^T = R^T.
Eigen::MatrixXd solve_on_right(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& r,
                               const char* who) {
  if (exactly_lower_triangular(lhs)) {
    return lhs.transpose().triangularView<Eigen::Upper>().solve(r.transpose()).transpose();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs.transpose());
  if (!lu.isInvertible()) {
    throw NumericalError(std::string(who) + ": resolvent is singular");
  }
  return lu.solve(r.transpose()).transpose();
}

}  // namespace

BlockMatrix feedback_from_youla(const BlockMatrix& q, const BlockMatrix& j) {
  require_conforming(q, j, "feedback_from_youla");
  const Eigen::Index dim = q.data.rows();
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(dim, dim) + q.data * j.data;
  // K = (I + Q J)^-1 Q, the rectangular-shape reading of K = Q (I + J Q)^-1.
  return BlockMatrix(q.rows, q.cols, solve_on_left(lhs, q.data, "feedback_from_youla"));
}

BlockMatrix youla_from_feedback(const BlockMatrix& k, const BlockMatrix& j) {
  require_conforming(k, j, "youla_from_feedback");
  const Eigen::Index dim = j.data.rows();
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(dim, dim) - j.data * k.data;
  // Q = K (I - J K)^-1.
  return BlockMatrix(k.rows, k.cols, solve_on_right(lhs, k.data, "youla_from_feedback"));
}

}  // namespace regretctl
