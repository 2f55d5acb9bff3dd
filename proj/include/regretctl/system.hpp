#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace regretctl {

// Time-varying finite-horizon plant
//   x_{t+1} = A_t x_t + Bu_t u_t + Bw_t w_t,   x_0 = 0,   t = 0..T-1
//   y_t     = C_t x_t + v_t
// with cost x_T' QT x_T + sum_t x_t' Q_t x_t + u_t' R_t u_t. Since x_0 = 0 the
// state costs carried here run t = 1..T-1; QT is the terminal weight.
struct SystemInstance {
  int horizon = 0;  // T
  std::vector<Eigen::MatrixXd> a;       // T entries, n x n
  std::vector<Eigen::MatrixXd> b_u;     // T entries, n x m
  std::vector<Eigen::MatrixXd> b_w;     // T entries, n x n_w
  std::vector<Eigen::MatrixXd> c;       // T entries, p x n
  std::vector<Eigen::MatrixXd> q;       // T-1 entries (t = 1..T-1), n x n, PSD
  Eigen::MatrixXd q_terminal;           // n x n, PSD
  std::vector<Eigen::MatrixXd> r;       // T entries, m x m, PD
  std::string label;

  int state_dim() const { return static_cast<int>(a.front().rows()); }
  int control_dim() const { return static_cast<int>(b_u.front().cols()); }
  int disturbance_dim() const { return static_cast<int>(b_w.front().cols()); }
  int measurement_dim() const { return static_cast<int>(c.front().rows()); }

  // Shape consistency, PSD state costs, PD control costs; throws InputError
  // naming the offending step.
  void validate() const;

  // Convenience constructor for time-invariant data.
  static SystemInstance lti(int horizon, const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& b_u, const Eigen::MatrixXd& b_w,
                            const Eigen::MatrixXd& c, const Eigen::MatrixXd& q,
                            const Eigen::MatrixXd& q_terminal, const Eigen::MatrixXd& r);
};

// One realization of the exogenous inputs, stacked over the horizon.
struct Instance {
  Eigen::VectorXd w;  // length n_w * T
  Eigen::VectorXd v;  // length p * T

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd z(w.size() + v.size());
    z << w, v;
    return z;
  }
  double energy() const { return w.squaredNorm() + v.squaredNorm(); }
};

}  // namespace regretctl
