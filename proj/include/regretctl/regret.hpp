#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "regretctl/benchmark.hpp"
#include "regretctl/controller.hpp"
#include "regretctl/lifting.hpp"

namespace regretctl {

// Symmetric operator whose quadratic form on a stacked instance [w; v] is the
// cost difference cost(Q, w, v) - cost(Q0, w, v).
Eigen::MatrixXd regret_operator(const LiftedSystem& lift, const BlockMatrix& q,
                                const BlockMatrix& q0);

// Quantities reused across feasibility probes at different levels.
struct RegretSynthesisContext {
  Controller noncausal;           // Theorem-2 benchmark
  Eigen::MatrixXd cross_energy;   // F^T G (I + L^T L)^-1 G^T F
  Eigen::MatrixXd d_factor;       // D D^T = gram_y
  bool benchmark_already_causal = false;
};

RegretSynthesisContext make_regret_context(const LiftedSystem& lift);

struct RegretSuboptimalResult {
  bool feasible = false;
  double gamma = 0.0;
  // Infeasible: the Nehari level that was violated (Hankel norm of the
  // anticausal part of the shifted benchmark).
  double violated_level = 0.0;
  std::optional<Controller> controller;
};

// Causal controller K with cost(K, z) - cost(K_nc, z) < gamma^2 ||z||^2 for
// all instances z, when one exists. Works through the equivalent condition
// || E (Q - Q_nc) D ||_2 < gamma with E^T E = gram_u + gamma^-2 cross_energy
// and D D^T = gram_y, reduced to a Nehari problem at level gamma.
RegretSuboptimalResult regret_suboptimal(const LiftedSystem& lift, double gamma);
RegretSuboptimalResult regret_suboptimal(const LiftedSystem& lift,
                                         const RegretSynthesisContext& ctx, double gamma);

struct SynthesisReport {
  double gamma_opt = 0.0;
  Controller controller;                 // causal, regret optimal to tolerance
  double certificate_lambda_max = 0.0;   // top eigenvalue of the regret operator
  std::vector<std::pair<double, bool>> bisection_trace;
  Instance worst_case;
  double worst_case_ratio = 0.0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
};

// Bisection on gamma between 0 and a certified upper bound derived from the
// causal-H2 controller. rel_tol in (0, 0.1], abs_tol > 0.
SynthesisReport synth_regret_optimal(const LiftedSystem& lift, double rel_tol,
                                     double abs_tol);

// Unit-energy instance maximizing (cost(Q, z) - cost(Q0, z)) / ||z||^2, i.e.
// the top eigenvector of the regret operator, with the attained ratio.
std::pair<Instance, double> worst_case_instance(const LiftedSystem& lift,
                                                const BlockMatrix& q,
                                                const BlockMatrix& q0);

}  // namespace regretctl
