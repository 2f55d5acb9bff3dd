#include <doctest.h>

#include <Eigen/SVD>

#include "regretctl/block_matrix.hpp"
#include "regretctl/errors.hpp"
#include "regretctl/factorization.hpp"
#include "regretctl/parrott.hpp"
#include "regretctl/spectral.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace regretctl;
using testsup::Draw;

TEST_CASE("causal_split on 2x2 scalar blocks") {
  const BlockPartition part = BlockPartition::uniform(2, 1);
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  const CausalSplit split = causal_split(BlockMatrix(part, part, m));
  Eigen::MatrixXd causal(2, 2), anticausal(2, 2);
  causal << 1, 0, 3, 4;
  anticausal << 0, 2, 0, 0;
  CHECK(split.causal.data == causal);
  CHECK(split.anticausal.data == anticausal);
}

TEST_CASE("causal_split of a lower-triangular matrix is the identity split") {
  Draw draw(11);
  const BlockPartition part = BlockPartition::uniform(3, 2);
  BlockMatrix m = BlockMatrix::zero(part, part);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) m.block(i, j) = draw.matrix(2, 2);
  }
  const CausalSplit split = causal_split(m);
  CHECK(split.causal.data == m.data);
  CHECK(split.anticausal.data.isZero(0.0));
}

TEST_CASE("causal_split reconstructs exactly on random partitions") {
  Draw draw(12);
  for (int rep = 0; rep < 20; ++rep) {
    const int blocks = draw.integer(1, 5);
    std::vector<int> row_sizes, col_sizes;
    for (int b = 0; b < blocks; ++b) {
      row_sizes.push_back(draw.integer(1, 3));
      col_sizes.push_back(draw.integer(1, 3));
    }
    const BlockPartition rows{row_sizes}, cols{col_sizes};
    const BlockMatrix m(rows, cols, draw.matrix(rows.total(), cols.total()));
    const CausalSplit split = causal_split(m);
    CHECK(split.causal.data + split.anticausal.data == m.data);
    CHECK(split.causal.is_causal());
    CHECK(split.anticausal.is_strictly_anticausal());
  }
}

TEST_CASE("causal_split rejects mismatched block counts") {
  const BlockMatrix m(BlockPartition::uniform(2, 1), BlockPartition::uniform(3, 1),
                      Eigen::MatrixXd::Zero(2, 3));
  CHECK_THROWS_AS(causal_split(m), StructuralError);
}

TEST_CASE("partition and block-matrix invariants are enforced") {
  CHECK_THROWS_AS(BlockPartition(std::vector<int>{}), StructuralError);
  CHECK_THROWS_AS(BlockPartition(std::vector<int>{2, 0}), StructuralError);
  CHECK_THROWS_AS(BlockPartition::uniform(0, 1), StructuralError);
  const BlockPartition part({2, 3});
  CHECK(part.total() == 5);
  CHECK(part.offset(1) == 2);
  CHECK_THROWS_AS(BlockMatrix(part, part, Eigen::MatrixXd::Zero(4, 5)), StructuralError);
}

TEST_CASE("chol_forward basics") {
  CHECK(chol_forward(Eigen::MatrixXd::Identity(4, 4)) == Eigen::MatrixXd::Identity(4, 4));

  Eigen::MatrixXd m(2, 2);
  m << 4, 2, 2, 2;
  const Eigen::MatrixXd d = chol_forward(m);
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 0, 1, 1;
  CHECK((d - expected).norm() < 1e-14);
  CHECK((d * d.transpose() - m).norm() <= 1e-10 * m.norm());

  Eigen::VectorXd diag(3);
  diag << 2.0, 0.5, 3.0;
  const Eigen::MatrixXd sq = (diag.array() * diag.array()).matrix().asDiagonal();
  CHECK((chol_forward(sq) - Eigen::MatrixXd(diag.asDiagonal())).norm() == 0.0);
}

TEST_CASE("chol_reverse basics") {
  CHECK(chol_reverse(Eigen::MatrixXd::Identity(3, 3)) == Eigen::MatrixXd::Identity(3, 3));

  Eigen::MatrixXd m(2, 2);
  m << 2, 2, 2, 4;
  const Eigen::MatrixXd e = chol_reverse(m);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 0, 1, 2;
  CHECK((e - expected).norm() < 1e-14);
  CHECK((e.transpose() * e - m).norm() <= 1e-10 * m.norm());
}

TEST_CASE("chol_reverse equals the reversal-permutation construction") {
  Draw draw(13);
  const int n = 7;
  const Eigen::MatrixXd m = draw.spd(n);
  Eigen::MatrixXd rev(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rev(i, j) = m(n - 1 - i, n - 1 - j);
  }
  const Eigen::MatrixXd d = chol_forward(rev);
  Eigen::MatrixXd via_perm(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) via_perm(i, j) = d(n - 1 - j, n - 1 - i);
  }
  CHECK(chol_reverse(m) == via_perm);
}

TEST_CASE("triangular factors: residual, triangularity, positive diagonal") {
  Draw draw(14);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = draw.integer(1, 60);
    const Eigen::MatrixXd m = draw.spd(n, 1e4);
    const Eigen::MatrixXd d = chol_forward(m);
    const Eigen::MatrixXd e = chol_reverse(m);
    CHECK((d * d.transpose() - m).norm() <= 1e-10 * m.norm());
    CHECK((e.transpose() * e - m).norm() <= 1e-10 * m.norm());
    CHECK(d.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0));
    CHECK(e.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0));
    CHECK(d.diagonal().minCoeff() > 0.0);
    CHECK(e.diagonal().minCoeff() > 0.0);
  }
}

TEST_CASE("large well-conditioned factorization keeps the 1e-10 bound") {
  Draw draw(15);
  const int n = 200;
  const Eigen::MatrixXd m = draw.spd(n, 1e6);
  CHECK((chol_forward(m) * chol_forward(m).transpose() - m).norm() <= 1e-10 * m.norm());
  const Eigen::MatrixXd e = chol_reverse(m);
  CHECK((e.transpose() * e - m).norm() <= 1e-10 * m.norm());
}

TEST_CASE("chol_forward reports the failing pivot on indefinite input") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;  // indefinite
  CHECK_THROWS_AS(chol_forward(m), NumericalError);
  CHECK_THROWS_AS(chol_reverse(m), NumericalError);
  try {
    chol_forward(m);
  } catch (const NumericalError& err) {
    CHECK(std::string(err.what()).find("pivot at index 1") != std::string::npos);
  }
}

TEST_CASE("chol rejects asymmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(chol_forward(m), StructuralError);
}

TEST_CASE("parrott scalar example: A=0, B=1, C=1, gamma=1") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd b = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(1, 1);
  const ParrottResult result = parrott_complete(a, b, c, 1.0);
  REQUIRE(result.feasible);
  CHECK(result.completion(0, 0) == doctest::Approx(0.0).epsilon(1e-12));

  // Exhaustive grid over the scalar corner: X = 0 attains the minimum norm 1.
  auto completed_norm = [&](double x) {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, x;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
  };
  CHECK(completed_norm(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double x = -2.0; x <= 2.0; x += 0.05) {
    CHECK(completed_norm(x) >= completed_norm(0.0) - 1e-12);
  }
}

TEST_CASE("parrott infeasible when a border exceeds gamma") {
  Draw draw(16);
  const Eigen::MatrixXd a = draw.matrix(2, 2);
  const Eigen::MatrixXd b = draw.matrix(2, 3);
  const Eigen::MatrixXd c = draw.matrix(2, 2);
  Eigen::MatrixXd row(2, 5);
  row << a, b;
  const double bound = spectral_norm(row);
  CHECK_FALSE(parrott_complete(a, b, c, 0.9 * bound).feasible);
}

TEST_CASE("parrott trivial corner: B=0, C=0 completes with X=0") {
  Draw draw(17);
  const Eigen::MatrixXd a = draw.matrix(3, 2);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2);
  const Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  const ParrottResult result = parrott_complete(a, b, c, 1.01 * spectral_norm(a));
  REQUIRE(result.feasible);
  CHECK(result.completion.isZero(0.0));
}

TEST_CASE("parrott property: feasibility margins over random problems") {
  Draw draw(18);
  for (int rep = 0; rep < 200; ++rep) {
    const int p = draw.integer(1, 4), q = draw.integer(1, 4);
    const int r = draw.integer(1, 4), s = draw.integer(1, 4);
    const Eigen::MatrixXd a = draw.matrix(p, q);
    const Eigen::MatrixXd b = draw.matrix(p, r);
    const Eigen::MatrixXd c = draw.matrix(s, q);
    Eigen::MatrixXd row(p, q + r), col(p + s, q);
    row << a, b;
    col << a, c;
    const double bound = std::max(spectral_norm(row), spectral_norm(col));

    const ParrottResult feasible = parrott_complete(a, b, c, 1.01 * bound);
    REQUIRE(feasible.feasible);
    Eigen::MatrixXd full(p + s, q + r);
    full << a, b, c, feasible.completion;
    CHECK(spectral_norm(full) <= 1.01 * bound * (1.0 + 1e-9));

    CHECK_FALSE(parrott_complete(a, b, c, 0.99 * bound).feasible);
  }
}

TEST_CASE("spectral_extremes symmetric mode pins diag(1, 3)") {
  Eigen::MatrixXd m = Eigen::Vector2d(1.0, 3.0).asDiagonal();
  const auto ext = spectral_extremes(m, SpectralMode::SymmetricEig);
  CHECK(ext.min_value == doctest::Approx(1.0));
  CHECK(ext.max_value == doctest::Approx(3.0));
  CHECK((m * ext.max_left - ext.max_value * ext.max_left).norm() <= 1e-8 * m.norm());
}

TEST_CASE("spectral_extremes singular mode on a rank-1 matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 2, 0, 0;
  const auto ext = spectral_extremes(m, SpectralMode::Singular);
  CHECK(ext.max_value == doctest::Approx(2.0));
  CHECK(ext.min_value == doctest::Approx(0.0));
  CHECK((m * ext.max_right - ext.max_value * ext.max_left).norm() <= 1e-8 * m.norm());
}

TEST_CASE("spectral_extremes agrees with power iteration") {
  Draw draw(19);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = draw.integer(2, 20);
    Eigen::MatrixXd m = draw.matrix(n, n);
    m = 0.5 * (m + m.transpose()).eval();
    const auto ext = spectral_extremes(m, SpectralMode::SymmetricEig);
    const double oracle = oracles::power_iteration_lambda_max(m);
    CHECK(std::abs(ext.max_value - oracle) <= 1e-8 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("spectral_extremes shift identity") {
  Draw draw(20);
  const int n = 12;
  Eigen::MatrixXd m = draw.matrix(n, n);
  m = 0.5 * (m + m.transpose()).eval();
  const double c = 2.75;
  const auto base = spectral_extremes(m, SpectralMode::SymmetricEig);
  const auto shifted = spectral_extremes(
      Eigen::MatrixXd(m + c * Eigen::MatrixXd::Identity(n, n)), SpectralMode::SymmetricEig);
  CHECK(std::abs(shifted.max_value - base.max_value - c) <= 1e-9 * m.norm());
  CHECK(std::abs(shifted.min_value - base.min_value - c) <= 1e-9 * m.norm());
}

TEST_CASE("spectral_extremes is deterministic across calls") {
  Draw draw(21);
  Eigen::MatrixXd m = draw.matrix(9, 9);
  m = 0.5 * (m + m.transpose()).eval();
  const auto first = spectral_extremes(m, SpectralMode::SymmetricEig);
  const auto second = spectral_extremes(m, SpectralMode::SymmetricEig);
  CHECK(first.max_value == second.max_value);
  CHECK(first.max_left == second.max_left);
  CHECK(first.min_left == second.min_left);
}

TEST_CASE("spectral_extremes rejects non-finite input") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral_extremes(m, SpectralMode::Singular), InputError);
}
