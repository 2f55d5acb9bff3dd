// Throughput benchmark: scenario evaluation with OpenMP-parallel replications
// versus the serial reference path, verifying that both produce identical
// tables.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "regretctl/benchmark.hpp"
#include "regretctl/regret.hpp"
#include "regretctl/sim.hpp"

namespace {

using namespace regretctl;

SystemInstance make_system(int horizon, int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = 0.2;
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  return SystemInstance::lti(horizon, a, b, b, b, q, q, q);
}

double time_scenario(const SystemInstance& sys, const std::vector<Controller>& controllers,
                     const DisturbanceSpec& spec, int reps, bool parallel,
                     ComparisonTable& out) {
  const auto start = std::chrono::steady_clock::now();
  out = run_scenario(sys, controllers, spec, reps, ScenarioOptions{parallel});
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

bool tables_identical(const ComparisonTable& a, const ComparisonTable& b) {
  if (a.costs.size() != b.costs.size()) return false;
  for (std::size_t c = 0; c < a.costs.size(); ++c) {
    for (std::size_t r = 0; r < a.costs[c].size(); ++r) {
      if (a.costs[c][r] != b.costs[c][r]) return false;
      if (a.regrets[c][r] != b.regrets[c][r]) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int horizon = argc > 1 ? std::atoi(argv[1]) : 24;
  const int n = argc > 2 ? std::atoi(argv[2]) : 3;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 64;

  const SystemInstance sys = make_system(horizon, n);
  const LiftedSystem lift = lift_system(sys);
  const SynthesisReport report = synth_regret_optimal(lift, 1e-6, 1e-9);

  std::vector<Controller> controllers;
  controllers.push_back(report.controller);
  controllers.push_back(synth_causal_h2(lift));
  controllers.push_back(synth_noncausal_h2(lift));

  DisturbanceSpec spec;
  spec.kind = DisturbanceSpec::Kind::Gaussian;
  spec.seed = 20240701;

  std::printf("scenario benchmark: T=%d n=%d reps=%d controllers=%zu\n", horizon, n, reps,
              controllers.size());
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not compiled in\n");
#endif

  ComparisonTable serial_table, parallel_table;
  const double warm = time_scenario(sys, controllers, spec, reps, false, serial_table);
  const double serial_s = time_scenario(sys, controllers, spec, reps, false, serial_table);
  const double parallel_s = time_scenario(sys, controllers, spec, reps, true, parallel_table);
  (void)warm;

  std::printf("serial:   %.3f s  (%.1f instances/s)\n", serial_s, reps / serial_s);
  std::printf("parallel: %.3f s  (%.1f instances/s)\n", parallel_s, reps / parallel_s);
  std::printf("speedup:  %.2fx\n", serial_s / parallel_s);
  if (!tables_identical(serial_table, parallel_table)) {
    std::printf("FAIL: serial and parallel tables differ\n");
    return 1;
  }
  std::printf("tables identical: yes\n");
  return 0;
}
