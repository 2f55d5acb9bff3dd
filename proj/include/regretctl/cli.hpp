#pragma once

namespace regretctl {

// Full command-line application. Exit codes: 0 success, 2 infeasible level,
// 3 invalid input, 4 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace regretctl
