#pragma once

#include <optional>

#include "regretctl/block_matrix.hpp"

namespace regretctl {

struct NehariResult {
  bool feasible = false;
  double gamma = 0.0;          // requested level
  double achieved_norm = 0.0;  // ||X - W||_2 when feasible
  BlockMatrix completion;      // causal X, valid when feasible
  // Infeasible case: the time split whose fixed corner already exceeds gamma.
  std::optional<int> violation_split;
  double violation_norm = 0.0;
};

// Distance from a strictly anticausal W to the causal matrices in spectral
// norm: max over splits k = 1..T-1 of || W[block rows 0..k-1, block cols
// k..T-1] ||_2. This fixed-corner bound is attained (sequential one-corner
// completion), so it equals min over causal X of ||X - W||_2.
double hankel_norm(const BlockMatrix& w);

// Causal X with ||X - W||_2 <= gamma (1 + 1e-8), or infeasibility evidence.
// Feasible iff gamma >= hankel_norm(W) * (1 - 1e-9). The free blocks are
// filled one block column at a time, right to left; each step is a single
// central Parrott completion whose feasibility is implied by the precheck.
NehariResult nehari_suboptimal(const BlockMatrix& w, double gamma);

// Optimal level is hankel_norm(W) directly; returns the suboptimal solution
// at hankel_norm(W) * (1 + rel_tol). rel_tol must lie in (0, 0.1].
NehariResult nehari_optimal(const BlockMatrix& w, double rel_tol);

}  // namespace regretctl
