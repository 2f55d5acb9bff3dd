#include "regretctl/regret.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "regretctl/errors.hpp"
#include "regretctl/factorization.hpp"
#include "regretctl/nehari.hpp"
#include "regretctl/spectral.hpp"

namespace regretctl {

Eigen::MatrixXd regret_operator(const LiftedSystem& lift, const BlockMatrix& q,
                                const BlockMatrix& q0) {
  const Eigen::MatrixXd t1 = transfer_operator(lift, q);
  const Eigen::MatrixXd t0 = transfer_operator(lift, q0);
  Eigen::MatrixXd r = t1.transpose() * t1 - t0.transpose() * t0;
  return 0.5 * (r + r.transpose()).eval();
}

RegretSynthesisContext make_regret_context(const LiftedSystem& lift) {
  RegretSynthesisContext ctx;
  ctx.noncausal = synth_noncausal_h2(lift);
  const Eigen::MatrixXd fg = lift.f.data.transpose() * lift.g.data;
  ctx.cross_energy = fg * lift.gram_w.ldlt().solve(fg.transpose());
  ctx.cross_energy = 0.5 * (ctx.cross_energy + ctx.cross_energy.transpose()).eval();
  ctx.d_factor = chol_forward(lift.gram_y);
  ctx.benchmark_already_causal = ctx.noncausal.youla.is_causal();
  return ctx;
}

namespace {

struct ShiftedBenchmark {
  Eigen::MatrixXd e_factor;  // E^T E = gram_u + gamma^-2 cross_energy
  BlockMatrix w_causal;
  BlockMatrix w_anticausal;
};

ShiftedBenchmark shift_benchmark(const LiftedSystem& lift, const RegretSynthesisContext& ctx,
                                 double gamma) {
  ShiftedBenchmark sh;
  const Eigen::MatrixXd p_gamma = lift.gram_u + ctx.cross_energy / (gamma * gamma);
  sh.e_factor = chol_reverse(p_gamma);
  const Eigen::MatrixXd w_hat =
      sh.e_factor * ctx.noncausal.youla.data * ctx.d_factor;
  CausalSplit split = causal_split(
      BlockMatrix(ctx.noncausal.youla.rows, ctx.noncausal.youla.cols, w_hat));
  sh.w_causal = std::move(split.causal);
  sh.w_anticausal = std::move(split.anticausal);
  return sh;
}

Controller causal_copy_of_benchmark(const RegretSynthesisContext& ctx) {
  Controller out;
  out.youla = ctx.noncausal.youla;
  out.causality = Causality::Causal;
  out.origin = ControllerOrigin::RegretOptimal;
  out.label = "regret-optimal";
  return out;
}

}  // namespace

RegretSuboptimalResult regret_suboptimal(const LiftedSystem& lift, double gamma) {
  return regret_suboptimal(lift, make_regret_context(lift), gamma);
}

RegretSuboptimalResult regret_suboptimal(const LiftedSystem& lift,
                                         const RegretSynthesisContext& ctx, double gamma) {
  if (!(gamma > 0.0)) throw InputError("regret_suboptimal: gamma must be positive");

  RegretSuboptimalResult out;
  out.gamma = gamma;

  // If the benchmark is already causal it is feasible at every level, and
  // returning it keeps degenerate horizons exact (no shifted algebra).
  if (ctx.benchmark_already_causal) {
    out.feasible = true;
    out.controller = causal_copy_of_benchmark(ctx);
    return out;
  }

  const ShiftedBenchmark sh = shift_benchmark(lift, ctx, gamma);
  const NehariResult nehari = nehari_suboptimal(sh.w_anticausal, gamma);
  if (!nehari.feasible) {
    out.feasible = false;
    out.violated_level = nehari.violation_norm;
    return out;
  }

  // Q = E^-1 (X + W_+) D^-1; triangular solves keep Q exactly causal.
  Eigen::MatrixXd z = nehari.completion.data + sh.w_causal.data;
  Eigen::MatrixXd q = solve_lower_left(sh.e_factor, z);
  q = solve_lower_right(ctx.d_factor, q);

  Controller k;
  k.youla = BlockMatrix(lift.u_part(), lift.y_part(), std::move(q));
  k.causality = Causality::Causal;
  k.origin = ControllerOrigin::RegretOptimal;
  k.label = "regret-suboptimal";
  k.check_causality_consistent();
  out.feasible = true;
  out.controller = std::move(k);
  return out;
}

SynthesisReport synth_regret_optimal(const LiftedSystem& lift, double rel_tol,
                                     double abs_tol) {
  if (!(rel_tol > 0.0) || rel_tol > 0.1) {
    throw InputError("synth_regret_optimal: rel_tol must lie in (0, 0.1]");
  }
  if (!(abs_tol > 0.0)) throw InputError("synth_regret_optimal: abs_tol must be positive");

  SynthesisReport report;
  report.rel_tol = rel_tol;
  report.abs_tol = abs_tol;

  const RegretSynthesisContext ctx = make_regret_context(lift);

  // Certified upper bound: the causal-H2 controller's own regret level.
  const Controller h2c = synth_causal_h2(lift);
  const Eigen::MatrixXd warm = regret_operator(lift, h2c.youla, ctx.noncausal.youla);
  const double warm_lambda =
      std::max(spectral_extremes(warm, SpectralMode::SymmetricEig).max_value, 0.0);
  const double gamma_ub = std::sqrt(warm_lambda) + abs_tol;

  double hi = gamma_ub;
  double lo = 0.0;
  RegretSuboptimalResult incumbent = regret_suboptimal(lift, ctx, hi);
  report.bisection_trace.emplace_back(hi, incumbent.feasible);
  for (int expand = 0; !incumbent.feasible; ++expand) {
    if (expand > 64) {
      throw NumericalError("synth_regret_optimal: failed to certify an upper bound");
    }
    lo = hi;
    hi *= 2.0;
    incumbent = regret_suboptimal(lift, ctx, hi);
    report.bisection_trace.emplace_back(hi, incumbent.feasible);
  }

  // Terminate at half the requested tolerance so the certificate and the
  // worst-case ratio both land within it.
  while (hi - lo > 0.5 * std::max(rel_tol * hi, abs_tol)) {
    const double mid = 0.5 * (hi + lo);
    RegretSuboptimalResult probe = regret_suboptimal(lift, ctx, mid);
    report.bisection_trace.emplace_back(mid, probe.feasible);
    if (probe.feasible) {
      hi = mid;
      incumbent = std::move(probe);
    } else {
      lo = mid;
    }
  }

  report.gamma_opt = hi;
  report.controller = std::move(*incumbent.controller);
  report.controller.label = "regret-optimal";
  report.controller.gamma_opt = hi;

  auto [inst, ratio] =
      worst_case_instance(lift, report.controller.youla, ctx.noncausal.youla);
  report.certificate_lambda_max = ratio;
  report.worst_case = std::move(inst);
  report.worst_case_ratio = ratio;
  return report;
}

std::pair<Instance, double> worst_case_instance(const LiftedSystem& lift,
                                                const BlockMatrix& q,
                                                const BlockMatrix& q0) {
  const Eigen::MatrixXd r = regret_operator(lift, q, q0);
  const auto ext = spectral_extremes(r, SpectralMode::SymmetricEig);
  const int w_dim = lift.w_part().total();
  const int v_dim = lift.y_part().total();
  Instance inst{ext.max_left.head(w_dim), ext.max_left.tail(v_dim)};
  return {std::move(inst), ext.max_value};
}

}  // namespace regretctl
