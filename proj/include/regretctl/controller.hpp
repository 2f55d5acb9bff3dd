#pragma once

#include <optional>
#include <string>

#include "regretctl/block_matrix.hpp"
#include "regretctl/lifting.hpp"

namespace regretctl {

enum class Causality { Causal, Noncausal };

enum class ControllerOrigin { H2Noncausal, H2Causal, RegretOptimal, Custom };

std::string to_string(ControllerOrigin origin);
ControllerOrigin origin_from_string(const std::string& name);

// A linear measurement-feedback policy, stored by its Youla parameter Q
// (u-space x y-space). The feedback gain K = Q (I + Q J)^-1 is derived on
// demand; for causal Q it always exists since Q J is strictly block lower.
struct Controller {
  BlockMatrix youla;
  Causality causality = Causality::Causal;
  ControllerOrigin origin = ControllerOrigin::Custom;
  std::string label;
  std::optional<double> gamma_opt;

  // Throws StructuralError if declared causal but Q has anticausal content.
  void check_causality_consistent() const;

  BlockMatrix feedback(const LiftedSystem& lift) const;
};

// K = Q (I + Q J)^-1; NumericalError if I + Q J is singular (possible only
// for noncausal Q).
BlockMatrix feedback_from_youla(const BlockMatrix& q, const BlockMatrix& j);

// Inverse map Q = K (I - J K)^-1.
BlockMatrix youla_from_feedback(const BlockMatrix& k, const BlockMatrix& j);

}  // namespace regretctl
