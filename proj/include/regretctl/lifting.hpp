#pragma once

#include <Eigen/Core>
#include <vector>

#include "regretctl/block_matrix.hpp"
#include "regretctl/system.hpp"

namespace regretctl {

// Operator form of a SystemInstance with controls normalized so R_t = I:
//   s = F u + G w,   y = J u + L w + v
// where s stacks the weighted states Q_t^(1/2) x_t for t = 1..T (terminal
// weight in the last block) and the u blocks are the normalized controls.
struct LiftedSystem {
  int horizon = 0;
  int n = 0, m = 0, n_w = 0, p = 0;

  BlockMatrix f;  // s-rows x u-cols, block row t depends on controls < t
  BlockMatrix g;  // s-rows x w-cols
  BlockMatrix j;  // y-rows x u-cols, strictly block lower triangular
  BlockMatrix l;  // y-rows x w-cols, strictly block lower triangular

  Eigen::MatrixXd gram_u;  // I + F^T F   (u-space)
  Eigen::MatrixXd gram_y;  // I + L L^T   (y-space)
  Eigen::MatrixXd gram_w;  // I + L^T L   (w-space)

  // Per-step Cholesky factors R_t = r_chol[t] * r_chol[t]^T; actual controls
  // recover as u_t = r_chol[t]^-T * (normalized u_t).
  std::vector<Eigen::MatrixXd> r_chol;

  BlockPartition u_part() const { return f.cols; }
  BlockPartition y_part() const { return j.rows; }
  BlockPartition w_part() const { return g.cols; }
  BlockPartition s_part() const { return f.rows; }

  // Zero Youla parameter / template for controller matrices (u-space x y-space).
  BlockMatrix controller_shape() const { return BlockMatrix::zero(f.cols, j.rows); }
};

LiftedSystem lift_system(const SystemInstance& sys);

// Closed-loop map [w; v] -> [s; u] for the controller with Youla parameter Q:
//   [[F Q L + G, F Q], [Q L, Q]].
Eigen::MatrixXd transfer_operator(const LiftedSystem& lift, const BlockMatrix& q);

// Squared closed-loop norm || T_K [w; v] ||^2; valid for causal and noncausal Q.
double evaluate_cost(const LiftedSystem& lift, const BlockMatrix& q, const Instance& inst);

struct OfflineOptimum {
  Eigen::VectorXd u;  // normalized coordinates
  double cost = 0.0;
};

// Global minimum of ||F u + G w||^2 + ||u||^2 over all control sequences:
// u* = -(I + F^T F)^-1 F^T G w.
OfflineOptimum fullinfo_offline_oracle(const LiftedSystem& lift, const Eigen::VectorXd& w);

// Diagnostics for the rotation identity theta * T_K * psi: with symmetric PSD
// roots both rotations are orthogonal and only the (2,2) entry depends on Q.
struct ThetaPsiReport {
  Eigen::MatrixXd rotated;        // theta * T_K * psi
  double theta_orthogonality = 0.0;  // || theta^T theta - I ||
  double psi_orthogonality = 0.0;    // || psi^T psi - I ||
  double identity_residual = 0.0;    // || rotated - closed form ||
  double max_residual = 0.0;
};

ThetaPsiReport theta_psi_identity(const LiftedSystem& lift, const BlockMatrix& q);

}  // namespace regretctl
