#pragma once

#include <optional>

#include "regretctl/controller.hpp"
#include "regretctl/lifting.hpp"
#include "regretctl/system.hpp"

namespace regretctl {

// Clairvoyant benchmark: the noncausal controller whose transfer operator has
// the smallest Frobenius norm, Q = -(I + F^T F)^-1 F^T G L^T (I + L L^T)^-1.
Controller synth_noncausal_h2(const LiftedSystem& lift);

// Best causal controller in the Frobenius norm: blockwise projection of the
// noncausal optimum under the causality-preserving change of variables
// Z = E Q D with E^T E = I + F^T F and D D^T = I + L L^T.
Controller synth_causal_h2(const LiftedSystem& lift);

struct WitnessPair {
  Instance first;   // controller 1 strictly beats controller 2 here
  Instance second;  // controller 2 strictly beats controller 1 here
  double margin_first = 0.0;   // cost_2 - cost_1 on `first`
  double margin_second = 0.0;  // cost_1 - cost_2 on `second`
};

enum class DominanceVerdict {
  Witness,               // neither controller dominates: both instances found
  Tie,                   // cost operators coincide within tolerance
  FirstDominatesOrTies,  // cost difference operator is PSD within tolerance
  SecondDominatesOrTies,
};

struct DominanceResult {
  DominanceVerdict verdict = DominanceVerdict::Tie;
  std::optional<WitnessPair> witness;
  double lambda_min = 0.0;  // extreme eigenvalues of T2'T2 - T1'T1
  double lambda_max = 0.0;
};

// Looks for instances where each controller strictly beats the other, by the
// extreme eigenvectors of the cost-difference operator T2'T2 - T1'T1.
DominanceResult dominance_witness(const LiftedSystem& lift, const Controller& c1,
                                  const Controller& c2);

}  // namespace regretctl
