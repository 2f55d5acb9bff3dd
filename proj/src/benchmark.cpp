#include "regretctl/benchmark.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "regretctl/errors.hpp"
#include "regretctl/factorization.hpp"
#include "regretctl/spectral.hpp"

namespace regretctl {

namespace {

// -F^T G L^T, the cross term driving every H2 closed form.
Eigen::MatrixXd neg_cross(const LiftedSystem& lift) {
  return -(lift.f.data.transpose() * lift.g.data) * lift.l.data.transpose();
}

}  // namespace

Controller synth_noncausal_h2(const LiftedSystem& lift) {
  // Q = gram_u^-1 * (-F^T G L^T) * gram_y^-1, both Gramians PD by construction.
  Eigen::MatrixXd q = lift.gram_u.ldlt().solve(neg_cross(lift));
  q = lift.gram_y.ldlt().solve(q.transpose()).transpose();
  Controller out;
  out.youla = BlockMatrix(lift.u_part(), lift.y_part(), std::move(q));
  out.causality = Causality::Noncausal;
  out.origin = ControllerOrigin::H2Noncausal;
  out.label = "h2-noncausal";
  return out;
}

Controller synth_causal_h2(const LiftedSystem& lift) {
  const Eigen::MatrixXd e = chol_reverse(lift.gram_u);   // E^T E = gram_u
  const Eigen::MatrixXd d = chol_forward(lift.gram_y);   // D D^T = gram_y
  // W' = -E^-T F^T G L^T D^-T; the Frobenius objective is ||E Q D - W'||^2 + const.
  Eigen::MatrixXd w = solve_lower_trans_left(e, Eigen::MatrixXd(neg_cross(lift)));
  // Right-divide by D^T: W D^T = w  =>  W = w D^-T, via D W^T = w^T.
  w = solve_lower_left(d, w.transpose().eval()).transpose();

  const BlockMatrix w_blocks(lift.u_part(), lift.y_part(), std::move(w));
  const BlockMatrix projected = causal_part(w_blocks);

  Eigen::MatrixXd q = solve_lower_left(e, projected.data);
  q = solve_lower_right(d, q);
  Controller out;
  out.youla = BlockMatrix(lift.u_part(), lift.y_part(), std::move(q));
  out.causality = Causality::Causal;
  out.origin = ControllerOrigin::H2Causal;
  out.label = "h2-causal";
  out.check_causality_consistent();
  return out;
}

DominanceResult dominance_witness(const LiftedSystem& lift, const Controller& c1,
                                  const Controller& c2) {
  const Eigen::MatrixXd t1 = transfer_operator(lift, c1.youla);
  const Eigen::MatrixXd t2 = transfer_operator(lift, c2.youla);
  Eigen::MatrixXd delta = t2.transpose() * t2 - t1.transpose() * t1;
  delta = 0.5 * (delta + delta.transpose()).eval();

  DominanceResult out;
  const auto ext = spectral_extremes(delta, SpectralMode::SymmetricEig);
  out.lambda_min = ext.min_value;
  out.lambda_max = ext.max_value;

  const double scale = std::max(std::abs(ext.min_value), std::abs(ext.max_value));
  const double tol = 1e-10 * scale;
  const int w_dim = lift.w_part().total();
  const int v_dim = lift.y_part().total();

  const bool has_positive = ext.max_value > tol;
  const bool has_negative = ext.min_value < -tol;
  if (has_positive && has_negative) {
    WitnessPair pair;
    pair.first = Instance{ext.max_left.head(w_dim), ext.max_left.tail(v_dim)};
    pair.second = Instance{ext.min_left.head(w_dim), ext.min_left.tail(v_dim)};
    pair.margin_first = evaluate_cost(lift, c2.youla, pair.first) -
                        evaluate_cost(lift, c1.youla, pair.first);
    pair.margin_second = evaluate_cost(lift, c1.youla, pair.second) -
                         evaluate_cost(lift, c2.youla, pair.second);
    out.verdict = DominanceVerdict::Witness;
    out.witness = std::move(pair);
  } else if (!has_positive && !has_negative) {
    out.verdict = DominanceVerdict::Tie;
  } else if (has_positive) {
    out.verdict = DominanceVerdict::FirstDominatesOrTies;
  } else {
    out.verdict = DominanceVerdict::SecondDominatesOrTies;
  }
  return out;
}

}  // namespace regretctl
