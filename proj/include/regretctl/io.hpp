#pragma once

#include <optional>
#include <string>

#include "regretctl/controller.hpp"
#include "regretctl/sim.hpp"
#include "regretctl/system.hpp"

namespace regretctl {

// JSON system config: {"horizon": T, "lti": {...}} or
// {"horizon": T, "time_varying": {...}}; matrices are row-major arrays of
// arrays. InputError on schema violations, naming the offending field.
SystemInstance load_system_config(const std::string& path);

// Content digest of the system data (dimension header plus all entries at 17
// significant digits), used to bind controller files to their system.
std::string system_digest(const SystemInstance& sys);

// Controller file: format_version, origin, label, causality, dims, optional
// gamma_opt, youla_Q and the generating system's digest.
void save_controller(const std::string& path, const Controller& ctrl,
                     const SystemInstance& sys);
// force skips the digest check against `sys`.
Controller load_controller(const std::string& path, const SystemInstance& sys,
                           bool force = false);

void save_instance(const std::string& path, const Instance& inst,
                   std::optional<double> ratio = std::nullopt);
Instance load_instance(const std::string& path, const SystemInstance& sys);

// Disturbance spec JSON; worst_case target/baseline fields are controller
// file paths resolved against `sys`. default_seed applies when the top-level
// spec carries no "seed" field.
DisturbanceSpec load_disturbance_spec(const std::string& path, const SystemInstance& sys,
                                      std::uint64_t default_seed = 0);

// CSV with columns t, x*, u*, y*, w*, v*, stage_cost; one row per step plus a
// terminal row carrying x_T and the terminal cost. 17 significant digits.
void write_trajectory_csv(const std::string& path, const SystemInstance& sys,
                          const Trajectory& traj, const Instance& inst);

void write_comparison_csv(const std::string& path, const ComparisonTable& table);

std::string format_double(double value);  // %.17g

}  // namespace regretctl
