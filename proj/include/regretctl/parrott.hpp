#pragma once

#include <Eigen/Core>

namespace regretctl {

// Result of completing the unknown corner X in [[A, B], [C, X]] to spectral
// norm <= gamma. The completion exists iff both bordered norms
// ||[A B]|| and ||[A; C]|| are <= gamma; `bound` reports their max.
struct ParrottResult {
  bool feasible = false;
  double bound = 0.0;
  Eigen::MatrixXd completion;  // empty when infeasible
};

// Central Parrott completion X = -C (gamma^2 I - A^T A)^-1 A^T B, declared
// infeasible when bound > gamma * (1 + 1e-9). Near the feasibility edge the
// corner inverse can be numerically singular; that raises NumericalError.
// A: p x q, B: p x r, C: s x q; empty dimensions are allowed (the
// corresponding bound contribution is 0).
ParrottResult parrott_complete(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               const Eigen::MatrixXd& c, double gamma);

namespace detail {

// Unchecked central completion for callers that certify feasibility
// themselves (the Nehari sweep); requires ||A|| strictly below gamma.
Eigen::MatrixXd parrott_central(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                const Eigen::MatrixXd& c, double gamma);

}  // namespace detail

}  // namespace regretctl
