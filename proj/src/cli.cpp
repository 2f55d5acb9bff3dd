#include "regretctl/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regretctl/benchmark.hpp"
#include "regretctl/errors.hpp"
#include "regretctl/io.hpp"
#include "regretctl/regret.hpp"
#include "regretctl/sim.hpp"

namespace regretctl {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitNumerical = 4;

std::uint64_t env_default_seed() {
  const char* env = std::getenv("REGRETCTL_SEED");
  if (!env) return 0;
  try {
    return static_cast<std::uint64_t>(std::stoull(env));
  } catch (const std::exception&) {
    throw InputError("REGRETCTL_SEED is not a valid unsigned integer");
  }
}

struct SynthArgs {
  std::string system_path;
  std::string out_path;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::optional<double> fixed_gamma;
};

int cmd_synth(const SynthArgs& args) {
  const SystemInstance sys = load_system_config(args.system_path);
  const LiftedSystem lift = lift_system(sys);

  if (args.fixed_gamma) {
    const RegretSuboptimalResult result = regret_suboptimal(lift, *args.fixed_gamma);
    if (!result.feasible) {
      std::cout << "infeasible at gamma=" << format_double(*args.fixed_gamma)
                << " (violated Nehari level " << format_double(result.violated_level)
                << ")\n";
      return kExitInfeasible;
    }
    Controller ctrl = *result.controller;
    ctrl.gamma_opt = *args.fixed_gamma;
    if (!args.out_path.empty()) save_controller(args.out_path, ctrl, sys);
    std::cout << "feasible at gamma=" << format_double(*args.fixed_gamma) << "\n";
    return kExitOk;
  }

  const SynthesisReport report = synth_regret_optimal(lift, args.rel_tol, args.abs_tol);
  if (!args.out_path.empty()) save_controller(args.out_path, report.controller, sys);
  std::cout << "gamma_opt=" << format_double(report.gamma_opt) << "\n";
  std::cout << "certificate_lambda_max=" << format_double(report.certificate_lambda_max)
            << "\n";
  std::cout << "bisection_steps=" << report.bisection_trace.size() << "\n";
  return kExitOk;
}

int cmd_benchmark(const std::string& system_path, const std::string& kind,
                  const std::string& out_path) {
  const SystemInstance sys = load_system_config(system_path);
  const LiftedSystem lift = lift_system(sys);
  Controller ctrl;
  if (kind == "noncausal-h2") {
    ctrl = synth_noncausal_h2(lift);
  } else if (kind == "causal-h2") {
    ctrl = synth_causal_h2(lift);
  } else {
    throw InputError("benchmark: unknown kind '" + kind + "'");
  }
  save_controller(out_path, ctrl, sys);
  std::cout << "wrote " << kind << " controller to " << out_path << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& system_path, const std::string& controller_path,
             const std::string& instance_path, bool force) {
  const SystemInstance sys = load_system_config(system_path);
  const LiftedSystem lift = lift_system(sys);
  const Controller ctrl = load_controller(controller_path, sys, force);
  const Instance inst = load_instance(instance_path, sys);
  const double cost = evaluate_cost(lift, ctrl.youla, inst);
  const Controller noncausal = synth_noncausal_h2(lift);
  const double cost_nc = evaluate_cost(lift, noncausal.youla, inst);
  std::cout << "cost=" << format_double(cost) << "\n";
  std::cout << "regret_vs_noncausal_h2=" << format_double(cost - cost_nc) << "\n";
  return kExitOk;
}

int cmd_worstcase(const std::string& system_path, const std::string& controller_path,
                  const std::string& baseline_path, const std::string& out_path,
                  bool force) {
  const SystemInstance sys = load_system_config(system_path);
  const LiftedSystem lift = lift_system(sys);
  const Controller ctrl = load_controller(controller_path, sys, force);
  const BlockMatrix baseline =
      baseline_path.empty() ? synth_noncausal_h2(lift).youla
                            : load_controller(baseline_path, sys, force).youla;
  const auto [inst, ratio] = worst_case_instance(lift, ctrl.youla, baseline);
  save_instance(out_path, inst, ratio);
  std::cout << "ratio=" << format_double(ratio) << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& system_path, const std::string& controller_path,
                 const std::string& disturbance_path, std::optional<std::uint64_t> seed,
                 const std::string& csv_path, bool force) {
  const SystemInstance sys = load_system_config(system_path);
  const Controller ctrl = load_controller(controller_path, sys, force);
  if (ctrl.causality != Causality::Causal) {
    throw InputError("simulate: controller is noncausal; use eval instead");
  }
  DisturbanceSpec spec = load_disturbance_spec(disturbance_path, sys, env_default_seed());
  if (seed) spec.seed = *seed;
  const Instance inst = gen_disturbance(sys, spec);
  const LiftedSystem lift = lift_system(sys);
  const BlockMatrix gain = ctrl.feedback(lift);
  const Trajectory traj = simulate_closed_loop(sys, gain, inst);
  write_trajectory_csv(csv_path, sys, traj, inst);
  std::cout << "total_cost=" << format_double(traj.total_cost) << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& system_path,
                const std::vector<std::string>& controller_paths,
                const std::string& disturbance_path, int reps,
                std::optional<std::uint64_t> seed, const std::string& csv_path, bool force,
                bool serial) {
  const SystemInstance sys = load_system_config(system_path);
  std::vector<Controller> controllers;
  controllers.reserve(controller_paths.size());
  for (const auto& path : controller_paths) {
    Controller ctrl = load_controller(path, sys, force);
    if (ctrl.label.empty()) ctrl.label = path;
    controllers.push_back(std::move(ctrl));
  }
  DisturbanceSpec spec = load_disturbance_spec(disturbance_path, sys, env_default_seed());
  if (seed) spec.seed = *seed;
  ScenarioOptions options;
  options.parallel = !serial;
  const ComparisonTable table = run_scenario(sys, controllers, spec, reps, options);
  write_comparison_csv(csv_path, table);
  for (const auto& row : table.rows) {
    std::cout << row.label << ": mean_cost=" << format_double(row.mean_cost)
              << " max_regret=" << format_double(row.max_regret);
    if (row.gamma_opt) std::cout << " bound_violations=" << row.bound_violations;
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"regretctl: finite-horizon regret-optimal measurement-feedback control"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Synthesize the regret-optimal causal controller");
  synth_cmd->add_option("--system", synth.system_path, "System config JSON")->required();
  synth_cmd->add_option("--out", synth.out_path, "Controller output path");
  synth_cmd->add_option("--tol", synth.rel_tol, "Relative bisection tolerance");
  synth_cmd->add_option("--abs-tol", synth.abs_tol, "Absolute bisection tolerance");
  double fixed_gamma = 0.0;
  auto* gamma_opt = synth_cmd->add_option(
      "--gamma", fixed_gamma, "Probe a fixed regret level instead of bisecting");

  std::string bench_system, bench_kind, bench_out;
  auto* bench_cmd = app.add_subcommand("benchmark", "Synthesize a benchmark controller");
  bench_cmd->add_option("--system", bench_system, "System config JSON")->required();
  bench_cmd->add_option("--kind", bench_kind, "noncausal-h2 | causal-h2")->required();
  bench_cmd->add_option("--out", bench_out, "Controller output path")->required();

  std::string eval_system, eval_controller, eval_instance;
  bool eval_force = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a controller on an instance");
  eval_cmd->add_option("--system", eval_system, "System config JSON")->required();
  eval_cmd->add_option("--controller", eval_controller, "Controller JSON")->required();
  eval_cmd->add_option("--instance", eval_instance, "Instance JSON")->required();
  eval_cmd->add_flag("--force", eval_force, "Skip the system digest check");

  std::string wc_system, wc_controller, wc_baseline, wc_out;
  bool wc_force = false;
  auto* wc_cmd = app.add_subcommand("worstcase", "Construct the worst-case instance");
  wc_cmd->add_option("--system", wc_system, "System config JSON")->required();
  wc_cmd->add_option("--controller", wc_controller, "Controller JSON")->required();
  wc_cmd->add_option("--baseline", wc_baseline, "Baseline controller (default: noncausal H2)");
  wc_cmd->add_option("--out", wc_out, "Instance output path")->required();
  wc_cmd->add_flag("--force", wc_force, "Skip the system digest check");

  std::string sim_system, sim_controller, sim_disturbance, sim_csv;
  bool sim_force = false;
  std::uint64_t sim_seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Closed-loop simulation to CSV");
  sim_cmd->add_option("--system", sim_system, "System config JSON")->required();
  sim_cmd->add_option("--controller", sim_controller, "Controller JSON")->required();
  sim_cmd->add_option("--disturbance", sim_disturbance, "Disturbance spec JSON")->required();
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "Seed override");
  sim_cmd->add_option("--csv", sim_csv, "Trajectory CSV output")->required();
  sim_cmd->add_flag("--force", sim_force, "Skip the system digest check");

  std::string cmp_system, cmp_disturbance, cmp_csv;
  std::vector<std::string> cmp_controllers;
  int cmp_reps = 1;
  std::uint64_t cmp_seed = 0;
  bool cmp_force = false, cmp_serial = false;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare controllers across replications");
  cmp_cmd->add_option("--system", cmp_system, "System config JSON")->required();
  cmp_cmd->add_option("--controllers", cmp_controllers, "Controller JSON paths")
      ->required()
      ->expected(-1);
  cmp_cmd->add_option("--disturbance", cmp_disturbance, "Disturbance spec JSON")->required();
  cmp_cmd->add_option("--reps", cmp_reps, "Number of replications");
  auto* cmp_seed_opt = cmp_cmd->add_option("--seed", cmp_seed, "Seed override");
  cmp_cmd->add_option("--csv", cmp_csv, "Comparison table CSV output")->required();
  cmp_cmd->add_flag("--force", cmp_force, "Skip the system digest check");
  cmp_cmd->add_flag("--serial", cmp_serial, "Disable parallel replications");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (synth_cmd->parsed()) {
      if (gamma_opt->count() > 0) synth.fixed_gamma = fixed_gamma;
      return cmd_synth(synth);
    }
    if (bench_cmd->parsed()) return cmd_benchmark(bench_system, bench_kind, bench_out);
    if (eval_cmd->parsed()) return cmd_eval(eval_system, eval_controller, eval_instance,
                                            eval_force);
    if (wc_cmd->parsed()) {
      return cmd_worstcase(wc_system, wc_controller, wc_baseline, wc_out, wc_force);
    }
    if (sim_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      if (sim_seed_opt->count() > 0) seed = sim_seed;
      return cmd_simulate(sim_system, sim_controller, sim_disturbance, seed, sim_csv,
                          sim_force);
    }
    if (cmp_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      if (cmp_seed_opt->count() > 0) seed = cmp_seed;
      return cmd_compare(cmp_system, cmp_controllers, cmp_disturbance, cmp_reps, seed,
                         cmp_csv, cmp_force, cmp_serial);
    }
  } catch (const InputError& err) {
    std::cerr << "error (invalid input): " << err.what() << "\n";
    return kExitInvalidInput;
  } catch (const StructuralError& err) {
    std::cerr << "error (invalid input): " << err.what() << "\n";
    return kExitInvalidInput;
  } catch (const NumericalError& err) {
    std::cerr << "error (numerical): " << err.what() << "\n";
    return kExitNumerical;
  }
  return kExitInvalidInput;
}

}  // namespace regretctl
