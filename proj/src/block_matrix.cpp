#include "regretctl/block_matrix.hpp"

#include <numeric>

#include "regretctl/errors.hpp"

namespace regretctl {

BlockPartition::BlockPartition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw StructuralError("BlockPartition: needs at least one block");
  offsets_.resize(sizes_.size() + 1);
  offsets_[0] = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1) throw StructuralError("BlockPartition: block sizes must be >= 1");
    offsets_[i + 1] = offsets_[i] + sizes_[i];
  }
}

BlockPartition BlockPartition::uniform(int count, int size) {
  if (count < 1) throw StructuralError("BlockPartition: count must be >= 1");
  return BlockPartition(std::vector<int>(static_cast<std::size_t>(count), size));
}

BlockMatrix::BlockMatrix(BlockPartition row_part, BlockPartition col_part, Eigen::MatrixXd values)
    : rows(std::move(row_part)), cols(std::move(col_part)), data(std::move(values)) {
  if (data.rows() != rows.total() || data.cols() != cols.total()) {
    throw StructuralError("BlockMatrix: data shape does not match partitions");
  }
}

BlockMatrix BlockMatrix::zero(const BlockPartition& row_part, const BlockPartition& col_part) {
  return BlockMatrix(row_part, col_part,
                     Eigen::MatrixXd::Zero(row_part.total(), col_part.total()));
}

Eigen::Block<Eigen::MatrixXd> BlockMatrix::block(int i, int j) {
  return data.block(rows.offset(i), cols.offset(j), rows.size(i), cols.size(j));
}

Eigen::Block<const Eigen::MatrixXd> BlockMatrix::block(int i, int j) const {
  return data.block(rows.offset(i), cols.offset(j), rows.size(i), cols.size(j));
}

namespace {

void require_square_blocks(const BlockMatrix& m, const char* who) {
  if (m.rows.count() != m.cols.count()) {
    throw StructuralError(std::string(who) + ": row/column block counts differ (" +
                          std::to_string(m.rows.count()) + " vs " +
                          std::to_string(m.cols.count()) + ")");
  }
}

}  // namespace

bool BlockMatrix::is_causal() const {
  require_square_blocks(*this, "is_causal");
  for (int i = 0; i < rows.count(); ++i) {
    for (int j = i + 1; j < cols.count(); ++j) {
      if (!(block(i, j).array() == 0.0).all()) return false;
    }
  }
  return true;
}

bool BlockMatrix::is_strictly_anticausal() const {
  require_square_blocks(*this, "is_strictly_anticausal");
  for (int i = 0; i < rows.count(); ++i) {
    for (int j = 0; j <= i && j < cols.count(); ++j) {
      if (!(block(i, j).array() == 0.0).all()) return false;
    }
  }
  return true;
}

CausalSplit causal_split(const BlockMatrix& m) {
  require_square_blocks(m, "causal_split");
  CausalSplit out{BlockMatrix::zero(m.rows, m.cols), BlockMatrix::zero(m.rows, m.cols)};
  for (int i = 0; i < m.rows.count(); ++i) {
    for (int j = 0; j < m.cols.count(); ++j) {
      if (j <= i) {
        out.causal.block(i, j) = m.block(i, j);
      } else {
        out.anticausal.block(i, j) = m.block(i, j);
      }
    }
  }
  return out;
}

BlockMatrix causal_part(const BlockMatrix& m) {
  require_square_blocks(m, "causal_part");
  BlockMatrix out = BlockMatrix::zero(m.rows, m.cols);
  for (int i = 0; i < m.rows.count(); ++i) {
    for (int j = 0; j <= i; ++j) out.block(i, j) = m.block(i, j);
  }
  return out;
}

BlockMatrix anticausal_part(const BlockMatrix& m) {
  require_square_blocks(m, "anticausal_part");
  BlockMatrix out = BlockMatrix::zero(m.rows, m.cols);
  for (int i = 0; i < m.rows.count(); ++i) {
    for (int j = i + 1; j < m.cols.count(); ++j) out.block(i, j) = m.block(i, j);
  }
  return out;
}

}  // namespace regretctl
