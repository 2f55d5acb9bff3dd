#include "regretctl/lifting.hpp"

#include <Eigen/Cholesky>
#include <string>
#include <vector>

#include "regretctl/errors.hpp"
#include "regretctl/factorization.hpp"

namespace regretctl {

LiftedSystem lift_system(const SystemInstance& sys) {
  sys.validate();
  const int t_len = sys.horizon;
  const int n = sys.state_dim();
  const int m = sys.control_dim();
  const int n_w = sys.disturbance_dim();
  const int p = sys.measurement_dim();

  LiftedSystem lift;
  lift.horizon = t_len;
  lift.n = n;
  lift.m = m;
  lift.n_w = n_w;
  lift.p = p;

  // Normalize controls so R_t = I: u~ = R^(1/2) u, Bu <- Bu R^(-1/2).
  lift.r_chol.reserve(static_cast<std::size_t>(t_len));
  std::vector<Eigen::MatrixXd> b_u_norm(static_cast<std::size_t>(t_len));
  for (int t = 0; t < t_len; ++t) {
    Eigen::MatrixXd rc;
    try {
      rc = chol_forward(sys.r[static_cast<std::size_t>(t)]);
    } catch (const std::exception&) {
      throw InputError("lift_system: R[t=" + std::to_string(t) + "] is not positive definite");
    }
    // Bu <- Bu rc^-T = (rc^-1 Bu^T)^T with R = rc rc^T.
    b_u_norm[static_cast<std::size_t>(t)] =
        solve_lower_left(rc, sys.b_u[static_cast<std::size_t>(t)].transpose().eval())
            .transpose();
    lift.r_chol.push_back(std::move(rc));
  }

  // Weighted-state factors: rows t = 1..T with H_t^T H_t = Q_t (Q_T terminal).
  std::vector<Eigen::MatrixXd> q_sqrt(static_cast<std::size_t>(t_len));
  for (int t = 1; t < t_len; ++t) {
    try {
      q_sqrt[static_cast<std::size_t>(t - 1)] = psd_factor(sys.q[static_cast<std::size_t>(t - 1)]);
    } catch (const std::exception&) {
      throw InputError("lift_system: Q[t=" + std::to_string(t) + "] is not positive semidefinite");
    }
  }
  try {
    q_sqrt[static_cast<std::size_t>(t_len - 1)] = psd_factor(sys.q_terminal);
  } catch (const std::exception&) {
    throw InputError("lift_system: QT is not positive semidefinite");
  }

  const BlockPartition s_part = BlockPartition::uniform(t_len, n);
  const BlockPartition u_part = BlockPartition::uniform(t_len, m);
  const BlockPartition w_part = BlockPartition::uniform(t_len, n_w);
  const BlockPartition y_part = BlockPartition::uniform(t_len, p);

  lift.f = BlockMatrix::zero(s_part, u_part);
  lift.g = BlockMatrix::zero(s_part, w_part);
  lift.j = BlockMatrix::zero(y_part, u_part);
  lift.l = BlockMatrix::zero(y_part, w_part);

  // phi[k] accumulates the state transition Phi(t, k+1) = A_{t-1} ... A_{k+1}
  // while t advances; combined with the input matrices it fills one block row
  // per t. Row index convention: F, G rows are t = 1..T (stored 0-based),
  // J, L rows are t = 0..T-1.
  std::vector<Eigen::MatrixXd> phi;  // phi[k] = Phi(t, k+1) for current t
  for (int t = 1; t <= t_len; ++t) {
    // advance: entering step t, phi[k] *= A_{t-1} for k < t-1, add phi[t-1]=I.
    for (auto& ph : phi) ph = (sys.a[static_cast<std::size_t>(t - 1)] * ph).eval();
    phi.push_back(Eigen::MatrixXd::Identity(n, n));

    const Eigen::MatrixXd& h = q_sqrt[static_cast<std::size_t>(t - 1)];
    for (int k = 0; k < t; ++k) {
      const Eigen::MatrixXd reach_u = phi[static_cast<std::size_t>(k)] * b_u_norm[static_cast<std::size_t>(k)];
      const Eigen::MatrixXd reach_w = phi[static_cast<std::size_t>(k)] * sys.b_w[static_cast<std::size_t>(k)];
      lift.f.block(t - 1, k) = h * reach_u;
      lift.g.block(t - 1, k) = h * reach_w;
      if (t < t_len) {
        lift.j.block(t, k) = sys.c[static_cast<std::size_t>(t)] * reach_u;
        lift.l.block(t, k) = sys.c[static_cast<std::size_t>(t)] * reach_w;
      }
    }
  }

  const int dim_u = u_part.total();
  const int dim_y = y_part.total();
  const int dim_w = w_part.total();
  lift.gram_u = Eigen::MatrixXd::Identity(dim_u, dim_u) + lift.f.data.transpose() * lift.f.data;
  lift.gram_y = Eigen::MatrixXd::Identity(dim_y, dim_y) + lift.l.data * lift.l.data.transpose();
  lift.gram_w = Eigen::MatrixXd::Identity(dim_w, dim_w) + lift.l.data.transpose() * lift.l.data;

  // Factor-check the Gramians; I + X^T X can only fail numerically.
  chol_forward(lift.gram_u);
  chol_forward(lift.gram_y);
  chol_forward(lift.gram_w);
  return lift;
}

namespace {

void require_controller_shape(const LiftedSystem& lift, const BlockMatrix& q, const char* who) {
  if (q.data.rows() != lift.f.cols.total() || q.data.cols() != lift.j.rows.total()) {
    throw StructuralError(std::string(who) + ": controller has shape " +
                          std::to_string(q.data.rows()) + "x" + std::to_string(q.data.cols()) +
                          ", expected " + std::to_string(lift.f.cols.total()) + "x" +
                          std::to_string(lift.j.rows.total()));
  }
  if (q.rows.count() != lift.horizon || q.cols.count() != lift.horizon) {
    throw StructuralError(std::string(who) + ": controller block counts do not match horizon");
  }
}

}  // namespace

Eigen::MatrixXd transfer_operator(const LiftedSystem& lift, const BlockMatrix& q) {
  require_controller_shape(lift, q, "transfer_operator");
  const Eigen::MatrixXd& f = lift.f.data;
  const Eigen::MatrixXd& g = lift.g.data;
  const Eigen::MatrixXd& l = lift.l.data;
  const Eigen::MatrixXd ql = q.data * l;
  const Eigen::MatrixXd fq = f * q.data;

  const Eigen::Index s_dim = f.rows();
  const Eigen::Index u_dim = f.cols();
  const Eigen::Index w_dim = g.cols();
  const Eigen::Index v_dim = l.rows();
  Eigen::MatrixXd t(s_dim + u_dim, w_dim + v_dim);
  t.topLeftCorner(s_dim, w_dim) = f * ql + g;
  t.topRightCorner(s_dim, v_dim) = fq;
  t.bottomLeftCorner(u_dim, w_dim) = ql;
  t.bottomRightCorner(u_dim, v_dim) = q.data;
  return t;
}

double evaluate_cost(const LiftedSystem& lift, const BlockMatrix& q, const Instance& inst) {
  require_controller_shape(lift, q, "evaluate_cost");
  if (inst.w.size() != lift.g.cols.total() || inst.v.size() != lift.j.rows.total()) {
    throw StructuralError("evaluate_cost: instance length mismatch");
  }
  const Eigen::VectorXd u = q.data * (lift.l.data * inst.w + inst.v);
  const Eigen::VectorXd s = lift.f.data * u + lift.g.data * inst.w;
  return s.squaredNorm() + u.squaredNorm();
}

OfflineOptimum fullinfo_offline_oracle(const LiftedSystem& lift, const Eigen::VectorXd& w) {
  if (w.size() != lift.g.cols.total()) {
    throw StructuralError("fullinfo_offline_oracle: disturbance length mismatch");
  }
  OfflineOptimum out;
  const Eigen::VectorXd rhs = lift.f.data.transpose() * (lift.g.data * w);
  out.u = -lift.gram_u.ldlt().solve(rhs);
  out.cost = (lift.f.data * out.u + lift.g.data * w).squaredNorm() + out.u.squaredNorm();
  return out;
}

ThetaPsiReport theta_psi_identity(const LiftedSystem& lift, const BlockMatrix& q) {
  require_controller_shape(lift, q, "theta_psi_identity");
  const Eigen::MatrixXd& f = lift.f.data;
  const Eigen::MatrixXd& g = lift.g.data;
  const Eigen::MatrixXd& l = lift.l.data;
  const Eigen::Index s_dim = f.rows();
  const Eigen::Index u_dim = f.cols();
  const Eigen::Index w_dim = g.cols();
  const Eigen::Index v_dim = l.rows();

  const Eigen::MatrixXd s_gram =
      Eigen::MatrixXd::Identity(s_dim, s_dim) + f * f.transpose();
  const Eigen::MatrixXd s_inv_half = symmetric_inv_sqrt(s_gram);
  const Eigen::MatrixXd t_inv_half = symmetric_inv_sqrt(lift.gram_u);
  const Eigen::MatrixXd t_half = symmetric_sqrt(lift.gram_u);
  const Eigen::MatrixXd u_inv_half = symmetric_inv_sqrt(lift.gram_y);
  const Eigen::MatrixXd u_half = symmetric_sqrt(lift.gram_y);
  const Eigen::MatrixXd v_inv_half = symmetric_inv_sqrt(lift.gram_w);

  Eigen::MatrixXd theta(s_dim + u_dim, s_dim + u_dim);
  theta.topLeftCorner(s_dim, s_dim) = s_inv_half;
  theta.topRightCorner(s_dim, u_dim) = -s_inv_half * f;
  theta.bottomLeftCorner(u_dim, s_dim) = t_inv_half * f.transpose();
  theta.bottomRightCorner(u_dim, u_dim) = t_inv_half;

  Eigen::MatrixXd psi(w_dim + v_dim, w_dim + v_dim);
  psi.topLeftCorner(w_dim, w_dim) = v_inv_half;
  psi.topRightCorner(w_dim, v_dim) = l.transpose() * u_inv_half;
  psi.bottomLeftCorner(v_dim, w_dim) = -l * v_inv_half;
  psi.bottomRightCorner(v_dim, v_dim) = u_inv_half;

  ThetaPsiReport rep;
  rep.rotated = theta * transfer_operator(lift, q) * psi;

  const Eigen::MatrixXd cross = f.transpose() * g * l.transpose();
  Eigen::MatrixXd expected(s_dim + u_dim, w_dim + v_dim);
  expected.topLeftCorner(s_dim, w_dim) = s_inv_half * g * v_inv_half;
  expected.topRightCorner(s_dim, v_dim) = s_inv_half * g * l.transpose() * u_inv_half;
  expected.bottomLeftCorner(u_dim, w_dim) = t_inv_half * f.transpose() * g * v_inv_half;
  expected.bottomRightCorner(u_dim, v_dim) =
      t_inv_half * (lift.gram_u * q.data * lift.gram_y + cross) * u_inv_half;

  rep.theta_orthogonality =
      (theta.transpose() * theta - Eigen::MatrixXd::Identity(theta.rows(), theta.cols())).norm();
  rep.psi_orthogonality =
      (psi.transpose() * psi - Eigen::MatrixXd::Identity(psi.rows(), psi.cols())).norm();
  rep.identity_residual = (rep.rotated - expected).norm();
  rep.max_residual = std::max({rep.theta_orthogonality, rep.psi_orthogonality,
                               rep.identity_residual});
  return rep;
}

}  // namespace regretctl
