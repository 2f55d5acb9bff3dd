#include "regretctl/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regretctl/errors.hpp"
#include "regretctl/parrott.hpp"
#include "regretctl/spectral.hpp"

namespace regretctl {

namespace {

void require_strictly_anticausal(const BlockMatrix& w, const char* who) {
  if (w.rows.count() != w.cols.count()) {
    throw StructuralError(std::string(who) + ": row/column block counts differ");
  }
  if (!w.is_strictly_anticausal()) {
    throw StructuralError(std::string(who) + ": input is not strictly anticausal");
  }
}

// || W[block rows 0..k-1, block cols k..T-1] ||_2.
double split_norm(const BlockMatrix& w, int k) {
  const int top = w.rows.offset(k);
  const int left = w.cols.offset(k);
  return spectral_norm(w.data.topRightCorner(top, w.cols.total() - left));
}

}  // namespace

double hankel_norm(const BlockMatrix& w) {
  require_strictly_anticausal(w, "hankel_norm");
  double best = 0.0;
  for (int k = 1; k < w.rows.count(); ++k) best = std::max(best, split_norm(w, k));
  return best;
}

NehariResult nehari_suboptimal(const BlockMatrix& w, double gamma) {
  require_strictly_anticausal(w, "nehari_suboptimal");
  if (!(gamma >= 0.0)) throw InputError("nehari_suboptimal: gamma must be nonnegative");

  const int t_len = w.rows.count();
  NehariResult out;
  out.gamma = gamma;

  double worst = 0.0;
  int worst_split = 0;
  for (int k = 1; k < t_len; ++k) {
    const double s = split_norm(w, k);
    if (s > worst) {
      worst = s;
      worst_split = k;
    }
  }
  if (gamma < worst * (1.0 - 1e-9)) {
    out.feasible = false;
    out.violation_split = worst_split;
    out.violation_norm = worst;
    return out;
  }

  out.feasible = true;
  if (worst == 0.0) {
    // W has no anticausal content above any split; X = 0 is optimal.
    out.completion = BlockMatrix::zero(w.rows, w.cols);
    out.achieved_norm = spectral_norm(w.data);
    return out;
  }

  // Working level with enough margin that every step's corner inverse is
  // well conditioned even when gamma sits at the feasibility edge.
  const double level = std::max(gamma, worst * (1.0 + 3e-9));

  // y holds X - W: strict upper blocks fixed at -W, lower blocks filled by the
  // sweep. Column block j is completed using the submatrix of columns >= j,
  // whose unknown corner is the bottom segment of column j.
  Eigen::MatrixXd y = -w.data;
  const int total_rows = w.rows.total();
  const int total_cols = w.cols.total();
  for (int j = t_len - 1; j >= 0; --j) {
    const int row_split = w.rows.offset(j);    // fixed rows above, free below
    const int col_lo = w.cols.offset(j);
    const int col_hi = j + 1 < t_len ? w.cols.offset(j + 1) : total_cols;

    const Eigen::MatrixXd a = y.block(0, col_hi, row_split, total_cols - col_hi);
    const Eigen::MatrixXd b = y.block(0, col_lo, row_split, col_hi - col_lo);
    const Eigen::MatrixXd c =
        y.block(row_split, col_hi, total_rows - row_split, total_cols - col_hi);
    y.block(row_split, col_lo, total_rows - row_split, col_hi - col_lo) =
        detail::parrott_central(a, b, c, level);
  }

  // The finished y equals X - W: causal blocks are X, the rest is -W.
  out.completion = causal_part(BlockMatrix(w.rows, w.cols, y));
  out.achieved_norm = spectral_norm(y);
  return out;
}

NehariResult nehari_optimal(const BlockMatrix& w, double rel_tol) {
  if (!(rel_tol > 0.0) || rel_tol > 0.1) {
    throw InputError("nehari_optimal: rel_tol must lie in (0, 0.1]");
  }
  const double level = hankel_norm(w);
  NehariResult out = nehari_suboptimal(w, level * (1.0 + rel_tol));
  out.gamma = level;
  return out;
}

}  // namespace regretctl
