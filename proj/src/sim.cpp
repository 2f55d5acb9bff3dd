#include "regretctl/sim.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "regretctl/benchmark.hpp"
#include "regretctl/errors.hpp"
#include "regretctl/factorization.hpp"
#include "regretctl/regret.hpp"
#include "regretctl/rng.hpp"

namespace regretctl {

Trajectory simulate_closed_loop(const SystemInstance& sys, const BlockMatrix& k,
                                const Instance& inst) {
  sys.validate();
  const int t_len = sys.horizon;
  const int n = sys.state_dim();
  const int m = sys.control_dim();
  const int n_w = sys.disturbance_dim();
  const int p = sys.measurement_dim();

  if (k.rows.count() != t_len || k.cols.count() != t_len ||
      k.data.rows() != static_cast<Eigen::Index>(m) * t_len ||
      k.data.cols() != static_cast<Eigen::Index>(p) * t_len) {
    throw StructuralError("simulate_closed_loop: controller shape does not match system");
  }
  if (!k.is_causal()) {
    throw StructuralError(
        "simulate_closed_loop: controller is noncausal; evaluate noncausal "
        "controllers via evaluate_cost instead");
  }
  if (inst.w.size() != static_cast<Eigen::Index>(n_w) * t_len ||
      inst.v.size() != static_cast<Eigen::Index>(p) * t_len) {
    throw StructuralError("simulate_closed_loop: instance length mismatch");
  }

  Trajectory traj;
  traj.x.assign(static_cast<std::size_t>(t_len) + 1, Eigen::VectorXd::Zero(n));
  traj.u.resize(static_cast<std::size_t>(t_len));
  traj.y.resize(static_cast<std::size_t>(t_len));
  traj.stage_costs.assign(static_cast<std::size_t>(t_len) + 1, 0.0);

  Eigen::VectorXd y_stack = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p) * t_len);
  for (int t = 0; t < t_len; ++t) {
    const auto st = static_cast<std::size_t>(t);
    const Eigen::VectorXd y_t =
        sys.c[st] * traj.x[st] + inst.v.segment(static_cast<Eigen::Index>(p) * t, p);
    y_stack.segment(static_cast<Eigen::Index>(p) * t, p) = y_t;
    traj.y[st] = y_t;

    // Normalized control from measurements up to t, then back to original
    // coordinates via R_t = rc rc^T.
    Eigen::VectorXd u_norm = Eigen::VectorXd::Zero(m);
    for (int j = 0; j <= t; ++j) {
      u_norm += k.block(t, j) * y_stack.segment(static_cast<Eigen::Index>(p) * j, p);
    }
    const Eigen::MatrixXd rc = chol_forward(sys.r[st]);
    const Eigen::VectorXd u_t = solve_lower_trans_left(rc, u_norm);
    traj.u[st] = u_t;

    const Eigen::VectorXd w_t = inst.w.segment(static_cast<Eigen::Index>(n_w) * t, n_w);
    traj.x[st + 1] = sys.a[st] * traj.x[st] + sys.b_u[st] * u_t + sys.b_w[st] * w_t;

    double stage = u_t.dot(sys.r[st] * u_t);
    if (t >= 1) stage += traj.x[st].dot(sys.q[st - 1] * traj.x[st]);
    traj.stage_costs[st] = stage;
  }
  traj.stage_costs[static_cast<std::size_t>(t_len)] =
      traj.x[static_cast<std::size_t>(t_len)].dot(sys.q_terminal *
                                                  traj.x[static_cast<std::size_t>(t_len)]);
  double total = 0.0;
  for (double s : traj.stage_costs) total += s;
  traj.total_cost = total;
  return traj;
}

namespace {

Instance gen_impl(const SystemInstance& sys, const DisturbanceSpec& spec,
                  std::uint64_t seed);

Instance gen_gaussian(const SystemInstance& sys, const DisturbanceSpec& spec,
                      std::uint64_t seed) {
  const int t_len = sys.horizon;
  const int n_w = sys.disturbance_dim();
  const int p = sys.measurement_dim();
  const CounterRng rng_w(seed, 1);
  const CounterRng rng_v(seed, 2);
  Instance inst;
  inst.w.resize(static_cast<Eigen::Index>(n_w) * t_len);
  inst.v.resize(static_cast<Eigen::Index>(p) * t_len);
  for (Eigen::Index i = 0; i < inst.w.size(); ++i) {
    inst.w(i) = spec.sigma_w * rng_w.normal(static_cast<std::uint64_t>(i));
  }
  for (Eigen::Index i = 0; i < inst.v.size(); ++i) {
    inst.v(i) = spec.sigma_v * rng_v.normal(static_cast<std::uint64_t>(i));
  }
  return inst;
}

Instance gen_sinusoid(const SystemInstance& sys, const DisturbanceSpec& spec) {
  const int t_len = sys.horizon;
  const int n_w = sys.disturbance_dim();
  const int p = sys.measurement_dim();
  constexpr double two_pi = 6.283185307179586476925286766559;
  Instance inst;
  inst.w.resize(static_cast<Eigen::Index>(n_w) * t_len);
  inst.v.resize(static_cast<Eigen::Index>(p) * t_len);
  for (int t = 0; t < t_len; ++t) {
    for (int i = 0; i < n_w; ++i) {
      inst.w(static_cast<Eigen::Index>(n_w) * t + i) =
          spec.amp_w * std::sin(two_pi * spec.freq * t + spec.phase + two_pi * i / n_w);
    }
    for (int i = 0; i < p; ++i) {
      inst.v(static_cast<Eigen::Index>(p) * t + i) =
          spec.amp_v * std::sin(two_pi * spec.freq * t + spec.phase + two_pi * i / p);
    }
  }
  return inst;
}

Instance gen_constant(const SystemInstance& sys, const DisturbanceSpec& spec) {
  const int t_len = sys.horizon;
  const int n_w = sys.disturbance_dim();
  const int p = sys.measurement_dim();
  if (spec.vec_w.size() != n_w || spec.vec_v.size() != p) {
    throw InputError("gen_disturbance: constant vectors must have per-step lengths n_w and p");
  }
  Instance inst;
  inst.w.resize(static_cast<Eigen::Index>(n_w) * t_len);
  inst.v.resize(static_cast<Eigen::Index>(p) * t_len);
  for (int t = 0; t < t_len; ++t) {
    inst.w.segment(static_cast<Eigen::Index>(n_w) * t, n_w) = spec.vec_w;
    inst.v.segment(static_cast<Eigen::Index>(p) * t, p) = spec.vec_v;
  }
  return inst;
}

Instance gen_worst_case(const SystemInstance& sys, const DisturbanceSpec& spec) {
  if (!spec.target) {
    throw InputError("gen_disturbance: worst_case requires a target controller");
  }
  const LiftedSystem lift = lift_system(sys);
  const BlockMatrix baseline =
      spec.baseline ? spec.baseline->youla : synth_noncausal_h2(lift).youla;
  return worst_case_instance(lift, spec.target->youla, baseline).first;
}

Instance gen_switching(const SystemInstance& sys, const DisturbanceSpec& spec,
                       std::uint64_t seed) {
  const int t_len = sys.horizon;
  const int n_w = sys.disturbance_dim();
  const int p = sys.measurement_dim();
  if (spec.segments.empty()) {
    throw InputError("gen_disturbance: switching needs at least one segment");
  }
  int expected_start = 0;
  for (const auto& seg : spec.segments) {
    if (!seg.spec) throw InputError("gen_disturbance: switching segment has no spec");
    if (seg.start_t != expected_start || seg.end_t <= seg.start_t) {
      throw InputError("gen_disturbance: switching segments must partition [0, T) "
                       "without gaps or overlaps");
    }
    expected_start = seg.end_t;
  }
  if (expected_start != t_len) {
    throw InputError("gen_disturbance: switching segments must end at the horizon");
  }

  Instance inst;
  inst.w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_w) * t_len);
  inst.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p) * t_len);
  for (std::size_t idx = 0; idx < spec.segments.size(); ++idx) {
    const auto& seg = spec.segments[idx];
    const std::uint64_t sub_seed =
        CounterRng::mix(seed ^ CounterRng::mix(static_cast<std::uint64_t>(idx) + 1)) +
        seg.spec->seed;
    const Instance full = gen_impl(sys, *seg.spec, sub_seed);
    const int len = seg.end_t - seg.start_t;
    inst.w.segment(static_cast<Eigen::Index>(n_w) * seg.start_t,
                   static_cast<Eigen::Index>(n_w) * len) =
        full.w.segment(static_cast<Eigen::Index>(n_w) * seg.start_t,
                       static_cast<Eigen::Index>(n_w) * len);
    inst.v.segment(static_cast<Eigen::Index>(p) * seg.start_t,
                   static_cast<Eigen::Index>(p) * len) =
        full.v.segment(static_cast<Eigen::Index>(p) * seg.start_t,
                       static_cast<Eigen::Index>(p) * len);
  }
  return inst;
}

Instance gen_impl(const SystemInstance& sys, const DisturbanceSpec& spec,
                  std::uint64_t seed) {
  Instance inst;
  switch (spec.kind) {
    case DisturbanceSpec::Kind::Gaussian: inst = gen_gaussian(sys, spec, seed); break;
    case DisturbanceSpec::Kind::Sinusoid: inst = gen_sinusoid(sys, spec); break;
    case DisturbanceSpec::Kind::Constant: inst = gen_constant(sys, spec); break;
    case DisturbanceSpec::Kind::WorstCase: inst = gen_worst_case(sys, spec); break;
    case DisturbanceSpec::Kind::Switching: inst = gen_switching(sys, spec, seed); break;
  }
  if (spec.normalize_to) {
    const double target = *spec.normalize_to;
    if (!(target >= 0.0)) throw InputError("gen_disturbance: normalize_to must be >= 0");
    const double energy = inst.energy();
    if (energy == 0.0) {
      throw InputError("gen_disturbance: cannot normalize a zero instance");
    }
    const double scale = std::sqrt(target / energy);
    inst.w *= scale;
    inst.v *= scale;
  }
  return inst;
}

}  // namespace

Instance gen_disturbance(const SystemInstance& sys, const DisturbanceSpec& spec,
                         std::optional<std::uint64_t> seed_override) {
  sys.validate();
  return gen_impl(sys, spec, seed_override.value_or(spec.seed));
}

ComparisonTable run_scenario(const SystemInstance& sys,
                             const std::vector<Controller>& controllers,
                             const DisturbanceSpec& spec, int replications,
                             const ScenarioOptions& options) {
  if (controllers.empty()) throw InputError("run_scenario: need at least one controller");
  if (replications < 1) throw InputError("run_scenario: replications must be >= 1");
  sys.validate();

  const LiftedSystem lift = lift_system(sys);
  const Controller noncausal = synth_noncausal_h2(lift);

  const std::size_t n_ctrl = controllers.size();
  std::vector<BlockMatrix> gains;  // feedback for causal controllers
  std::vector<bool> causal(n_ctrl, false);
  gains.reserve(n_ctrl);
  for (const auto& ctrl : controllers) {
    ctrl.check_causality_consistent();
    const bool is_causal = ctrl.causality == Causality::Causal;
    causal[gains.size()] = is_causal;
    gains.push_back(is_causal ? ctrl.feedback(lift) : BlockMatrix{});
  }

  ComparisonTable table;
  table.costs.assign(n_ctrl, std::vector<double>(static_cast<std::size_t>(replications), 0.0));
  table.regrets.assign(n_ctrl, std::vector<double>(static_cast<std::size_t>(replications), 0.0));
  table.benchmark_costs.assign(static_cast<std::size_t>(replications), 0.0);
  table.energies.assign(static_cast<std::size_t>(replications), 0.0);

  const std::uint64_t base_seed = spec.seed;
  auto evaluate_replication = [&](int rep) {
    const std::uint64_t rep_seed =
        CounterRng::mix(base_seed ^ CounterRng::mix(static_cast<std::uint64_t>(rep) + 1));
    const Instance inst = gen_disturbance(sys, spec, rep_seed);
    const auto sr = static_cast<std::size_t>(rep);
    table.energies[sr] = inst.energy();
    const double cost_nc = evaluate_cost(lift, noncausal.youla, inst);
    table.benchmark_costs[sr] = cost_nc;
    for (std::size_t ci = 0; ci < n_ctrl; ++ci) {
      const double op_cost = evaluate_cost(lift, controllers[ci].youla, inst);
      double cost = op_cost;
      if (causal[ci]) {
        const Trajectory traj = simulate_closed_loop(sys, gains[ci], inst);
        const double scale = std::max({1.0, traj.total_cost, op_cost});
        if (std::abs(traj.total_cost - op_cost) > 1e-8 * scale) {
          throw NumericalError("run_scenario: simulated and operator costs disagree");
        }
        cost = traj.total_cost;
      }
      table.costs[ci][sr] = cost;
      // Regret compares the two operator-form costs so that identical Youla
      // parameters yield exactly zero regret.
      table.regrets[ci][sr] = op_cost - cost_nc;
    }
  };

#ifdef _OPENMP
  if (options.parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int rep = 0; rep < replications; ++rep) {
      try {
        evaluate_replication(rep);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int rep = 0; rep < replications; ++rep) evaluate_replication(rep);
  }
#else
  (void)options;
  for (int rep = 0; rep < replications; ++rep) evaluate_replication(rep);
#endif

  for (std::size_t ci = 0; ci < n_ctrl; ++ci) {
    ComparisonRow row;
    row.label = controllers[ci].label.empty() ? ("controller-" + std::to_string(ci))
                                              : controllers[ci].label;
    row.origin = to_string(controllers[ci].origin);
    row.gamma_opt = controllers[ci].gamma_opt;
    double sum_cost = 0.0, sum_regret = 0.0;
    row.max_cost = table.costs[ci][0];
    row.max_regret = table.regrets[ci][0];
    for (int rep = 0; rep < replications; ++rep) {
      const auto sr = static_cast<std::size_t>(rep);
      sum_cost += table.costs[ci][sr];
      sum_regret += table.regrets[ci][sr];
      row.max_cost = std::max(row.max_cost, table.costs[ci][sr]);
      row.max_regret = std::max(row.max_regret, table.regrets[ci][sr]);
      if (row.gamma_opt) {
        const double bound =
            (*row.gamma_opt) * (*row.gamma_opt) * table.energies[sr] * (1.0 + 1e-6);
        if (table.regrets[ci][sr] > bound) ++row.bound_violations;
      }
    }
    row.mean_cost = sum_cost / replications;
    row.mean_regret = sum_regret / replications;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace regretctl
