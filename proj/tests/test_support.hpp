#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "regretctl/block_matrix.hpp"
#include "regretctl/lifting.hpp"
#include "regretctl/rng.hpp"
#include "regretctl/system.hpp"

namespace testsup {

using namespace regretctl;

// Deterministic draw helper with a single advancing counter, so mixed
// normal/uniform draws never share hash keys.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform(counter_++, 0.0, 1.0); }

  double uniform(double lo, double hi) { return rng_.uniform(counter_++, lo, hi); }

  int integer(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(rng_.bits(counter_++) % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal() {
    const double u1 = rng_.uniform(counter_++);
    const double u2 = rng_.uniform(counter_++);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Eigen::MatrixXd matrix(int rows, int cols, double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = scale * normal();
    }
    return m;
  }

  Eigen::VectorXd vector(int n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * normal();
    return v;
  }

  // SPD with eigenvalues in [1/sqrt(cond), sqrt(cond)] roughly.
  Eigen::MatrixXd spd(int n, double cond = 100.0) {
    const Eigen::MatrixXd g = matrix(n, n);
    Eigen::MatrixXd m = g * g.transpose();
    const double shift = m.trace() / (n * std::sqrt(cond));
    return m + shift * Eigen::MatrixXd::Identity(n, n);
  }

  Eigen::MatrixXd psd(int n) {
    const int rank = integer(1, n);
    const Eigen::MatrixXd g = matrix(n, rank);
    return g * g.transpose();
  }

  // Random well-scaled time-varying system within the given caps.
  SystemInstance system(int max_dim = 3, int max_horizon = 8) {
    const int n = integer(1, max_dim);
    const int m = integer(1, max_dim);
    const int n_w = integer(1, max_dim);
    const int p = integer(1, max_dim);
    const int horizon = integer(1, max_horizon);
    SystemInstance sys;
    sys.horizon = horizon;
    for (int t = 0; t < horizon; ++t) {
      Eigen::MatrixXd a = matrix(n, n, 0.6 / std::sqrt(static_cast<double>(n)));
      sys.a.push_back(a);
      sys.b_u.push_back(matrix(n, m, 0.8));
      sys.b_w.push_back(matrix(n, n_w, 0.8));
      sys.c.push_back(matrix(p, n, 0.8));
      sys.r.push_back(spd(m, 16.0));
    }
    for (int t = 1; t < horizon; ++t) sys.q.push_back(psd(n));
    sys.q_terminal = psd(n);
    sys.validate();
    return sys;
  }

  BlockMatrix controller(const LiftedSystem& lift, double scale = 1.0) {
    BlockMatrix q = lift.controller_shape();
    q.data = matrix(static_cast<int>(q.data.rows()), static_cast<int>(q.data.cols()), scale);
    return q;
  }

  BlockMatrix causal_controller(const LiftedSystem& lift, double scale = 1.0) {
    return causal_part(controller(lift, scale));
  }

  Instance instance(const LiftedSystem& lift, double scale = 1.0) {
    return Instance{vector(lift.w_part().total(), scale),
                    vector(lift.y_part().total(), scale)};
  }

  // Strictly anticausal matrix; blocks may be rectangular.
  BlockMatrix anticausal(int blocks, int row_size, int col_size, double scale = 1.0) {
    const BlockPartition rows = BlockPartition::uniform(blocks, row_size);
    const BlockPartition cols = BlockPartition::uniform(blocks, col_size);
    BlockMatrix w = BlockMatrix::zero(rows, cols);
    for (int i = 0; i < blocks; ++i) {
      for (int j = i + 1; j < blocks; ++j) {
        w.block(i, j) = matrix(row_size, col_size, scale);
      }
    }
    return w;
  }

  BlockMatrix anticausal(int blocks, int block_size, double scale = 1.0) {
    return anticausal(blocks, block_size, block_size, scale);
  }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

}  // namespace testsup
