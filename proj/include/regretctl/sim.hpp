#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regretctl/controller.hpp"
#include "regretctl/lifting.hpp"
#include "regretctl/system.hpp"

namespace regretctl {

// Closed-loop rollout. stage_costs has T+1 entries: x_t'Q_t x_t + u_t'R_t u_t
// for t = 0..T-1 and the terminal cost x_T'QT x_T last; total_cost is their sum.
struct Trajectory {
  std::vector<Eigen::VectorXd> x;  // T+1 states
  std::vector<Eigen::VectorXd> u;  // T controls (original coordinates)
  std::vector<Eigen::VectorXd> y;  // T measurements
  std::vector<double> stage_costs;
  double total_cost = 0.0;
};

// Sequential rollout of a causal feedback gain K (normalized u coordinates,
// as produced by feedback_from_youla). Noncausal gains are rejected; evaluate
// those through evaluate_cost instead.
Trajectory simulate_closed_loop(const SystemInstance& sys, const BlockMatrix& k,
                                const Instance& inst);

struct DisturbanceSpec {
  enum class Kind { Gaussian, Sinusoid, Constant, WorstCase, Switching };

  struct Segment {
    int start_t = 0;
    int end_t = 0;  // exclusive
    std::shared_ptr<const DisturbanceSpec> spec;
  };

  Kind kind = Kind::Gaussian;

  // gaussian
  double sigma_w = 1.0;
  double sigma_v = 1.0;
  // sinusoid: w_t[i] = amp_w sin(2 pi freq t + phase + 2 pi i / dim), same for v
  double freq = 0.1;
  double amp_w = 1.0;
  double amp_v = 0.0;
  double phase = 0.0;
  // constant (per-step vectors, repeated across the horizon)
  Eigen::VectorXd vec_w;
  Eigen::VectorXd vec_v;
  // worst_case: maximizer of the regret quotient of `target` against
  // `baseline` (defaults to the H2-optimal noncausal benchmark)
  std::shared_ptr<const Controller> target;
  std::shared_ptr<const Controller> baseline;
  // switching: segments must partition [0, T)
  std::vector<Segment> segments;

  std::uint64_t seed = 0;
  std::optional<double> normalize_to;  // rescale ||w||^2 + ||v||^2 to this
};

// Deterministic in (spec, seed): draws are counter-based, keyed by
// (seed, time step, coordinate). seed_override replaces spec.seed.
Instance gen_disturbance(const SystemInstance& sys, const DisturbanceSpec& spec,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

struct ComparisonRow {
  std::string label;
  std::string origin;
  double mean_cost = 0.0;
  double max_cost = 0.0;
  double mean_regret = 0.0;
  double max_regret = 0.0;
  std::optional<double> gamma_opt;
  int bound_violations = 0;  // counted only for controllers carrying gamma_opt
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  // Per-instance data, controller-major: costs[c][r] for replication r.
  std::vector<std::vector<double>> costs;
  std::vector<std::vector<double>> regrets;
  std::vector<double> benchmark_costs;  // cost of K_nc per replication
  std::vector<double> energies;         // ||w||^2 + ||v||^2 per replication
};

struct ScenarioOptions {
  bool parallel = true;  // replications via OpenMP when compiled in
};

// Evaluates every controller on `replications` independently drawn instances.
// Causal controllers are stepped through the simulator and cross-checked
// against the operator cost; noncausal ones are evaluated in operator form.
// Output is bit-identical between the parallel and serial paths.
ComparisonTable run_scenario(const SystemInstance& sys,
                             const std::vector<Controller>& controllers,
                             const DisturbanceSpec& spec, int replications,
                             const ScenarioOptions& options = {});

}  // namespace regretctl
