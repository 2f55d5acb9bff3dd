#pragma once

#include <Eigen/Core>
#include <vector>

namespace regretctl {

// Partition of a matrix dimension into contiguous blocks; block b covers
// rows/cols [offset(b), offset(b) + size(b)). Blocks correspond to time steps.
class BlockPartition {
 public:
  BlockPartition() = default;
  explicit BlockPartition(std::vector<int> sizes);
  static BlockPartition uniform(int count, int size);

  int count() const { return static_cast<int>(sizes_.size()); }
  int total() const { return offsets_.empty() ? 0 : offsets_.back(); }
  int size(int b) const { return sizes_[static_cast<std::size_t>(b)]; }
  int offset(int b) const { return offsets_[static_cast<std::size_t>(b)]; }
  const std::vector<int>& sizes() const { return sizes_; }

  bool operator==(const BlockPartition& other) const { return sizes_ == other.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;  // prefix sums, length count()+1
};

// Dense matrix with block structure on both dimensions. Causality queries
// (block triangularity) are defined when rows and cols have equal block counts.
struct BlockMatrix {
  BlockPartition rows;
  BlockPartition cols;
  Eigen::MatrixXd data;

  BlockMatrix() = default;
  BlockMatrix(BlockPartition row_part, BlockPartition col_part, Eigen::MatrixXd values);
  static BlockMatrix zero(const BlockPartition& row_part, const BlockPartition& col_part);

  Eigen::Block<Eigen::MatrixXd> block(int i, int j);
  Eigen::Block<const Eigen::MatrixXd> block(int i, int j) const;

  // True iff every block with column index > row index is exactly zero.
  bool is_causal() const;
  // True iff every block with column index <= row index is exactly zero.
  bool is_strictly_anticausal() const;
};

struct CausalSplit {
  BlockMatrix causal;      // block lower triangle including the block diagonal
  BlockMatrix anticausal;  // strict block upper triangle
};

// Exact decomposition M = causal + anticausal; pure block copies, no arithmetic.
CausalSplit causal_split(const BlockMatrix& m);

// Copies of the two triangles, for callers that need only one side.
BlockMatrix causal_part(const BlockMatrix& m);
BlockMatrix anticausal_part(const BlockMatrix& m);

}  // namespace regretctl
