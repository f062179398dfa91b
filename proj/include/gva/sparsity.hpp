#pragma once

// Sparsity patterns for lower-triangular Cholesky factors, stored in
// compressed-sparse-column form. Rows are sorted ascending within each
// column, and every column's first entry is its diagonal, which gives a
// canonical entry order (column-major) so patterns over the same structure
// compare equal.

#include <memory>
#include <utility>
#include <vector>

#include "gva/types.hpp"

namespace gva {

class SparsityPattern {
 public:
  // Builds from arbitrary 0-based (row, col) pairs with col <= row.
  // Duplicates are collapsed; missing diagonal entries are an error.
  static SparsityPattern from_entries(index_t dim,
                                      std::vector<std::pair<index_t, index_t>> entries);

  index_t dim() const { return dim_; }
  nnz_t nnz() const { return static_cast<nnz_t>(row_idx_.size()); }

  const std::vector<nnz_t>& col_ptr() const { return col_ptr_; }
  const std::vector<index_t>& row_idx() const { return row_idx_; }
  const std::vector<index_t>& col_idx() const { return col_idx_; }

  // Position of the diagonal entry of column j (always the first in the column).
  nnz_t diag_pos(index_t j) const { return col_ptr_[static_cast<std::size_t>(j)]; }

  // Entries in canonical (column-major) order, 0-based.
  std::vector<std::pair<index_t, index_t>> entries() const;

  // Position of entry (row, col) in the value array, or -1 if absent.
  nnz_t position(index_t row, index_t col) const;

  bool operator==(const SparsityPattern& other) const;

  friend SparsityPattern make_pattern_unchecked(index_t dim, std::vector<nnz_t> col_ptr,
                                                std::vector<index_t> row_idx);

 private:
  SparsityPattern() = default;
  void finalize();

  index_t dim_ = 0;
  std::vector<nnz_t> col_ptr_;
  std::vector<index_t> row_idx_;
  std::vector<index_t> col_idx_;  // column of each entry, for gather kernels
};

using PatternPtr = std::shared_ptr<const SparsityPattern>;

// Block-arrow pattern for models with n independent latent blocks of size p
// and m trailing global parameters: dense p x p lower-triangular diagonal
// blocks, dense m x p bottom row blocks, dense m x m lower-triangular corner.
SparsityPattern build_glmm_pattern(index_t n, index_t p, index_t m);

// Band-arrow pattern for state space models: band of width k below the
// diagonal on the first n rows/cols, plus m dense trailing rows and a dense
// m x m lower-triangular corner.
SparsityPattern build_ssm_pattern(index_t n, index_t k, index_t m);

// Full lower triangle (unrestricted factor) and diagonal-only (mean field).
SparsityPattern dense_lower_pattern(index_t dim);
SparsityPattern diagonal_pattern(index_t dim);

inline PatternPtr share(SparsityPattern p) {
  return std::make_shared<const SparsityPattern>(std::move(p));
}

}  // namespace gva
