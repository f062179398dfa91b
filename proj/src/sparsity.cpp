#include "gva/sparsity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gva {

namespace {

void check_dim(index_t dim) {
  if (dim < 1) throw std::invalid_argument("pattern dimension must be positive");
}

}  // namespace

void SparsityPattern::finalize() {
  col_idx_.resize(row_idx_.size());
  for (index_t j = 0; j < dim_; ++j) {
    for (nnz_t e = col_ptr_[j]; e < col_ptr_[j + 1]; ++e) {
      col_idx_[static_cast<std::size_t>(e)] = j;
    }
  }
}

SparsityPattern make_pattern_unchecked(index_t dim, std::vector<nnz_t> col_ptr,
                                       std::vector<index_t> row_idx) {
  SparsityPattern p;
  p.dim_ = dim;
  p.col_ptr_ = std::move(col_ptr);
  p.row_idx_ = std::move(row_idx);
  p.finalize();
  return p;
}

SparsityPattern SparsityPattern::from_entries(index_t dim,
                                              std::vector<std::pair<index_t, index_t>> entries) {
  check_dim(dim);
  for (auto [r, c] : entries) {
    if (r < 0 || r >= dim || c < 0 || c >= dim)
      throw std::invalid_argument("pattern entry out of range");
    if (c > r) throw std::invalid_argument("pattern entry above the diagonal");
  }
  for (index_t j = 0; j < dim; ++j) entries.emplace_back(j, j);
  // canonical order: by column, then row
  std::sort(entries.begin(), entries.end(), [](auto a, auto b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

  std::vector<nnz_t> col_ptr(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<index_t> row_idx;
  row_idx.reserve(entries.size());
  for (auto [r, c] : entries) {
    col_ptr[static_cast<std::size_t>(c) + 1]++;
    row_idx.push_back(r);
  }
  for (index_t j = 0; j < dim; ++j) col_ptr[j + 1] += col_ptr[j];
  return make_pattern_unchecked(dim, std::move(col_ptr), std::move(row_idx));
}

std::vector<std::pair<index_t, index_t>> SparsityPattern::entries() const {
  std::vector<std::pair<index_t, index_t>> out;
  out.reserve(row_idx_.size());
  for (std::size_t e = 0; e < row_idx_.size(); ++e) out.emplace_back(row_idx_[e], col_idx_[e]);
  return out;
}

nnz_t SparsityPattern::position(index_t row, index_t col) const {
  const auto begin = row_idx_.begin() + col_ptr_[col];
  const auto end = row_idx_.begin() + col_ptr_[col + 1];
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return -1;
  return static_cast<nnz_t>(it - row_idx_.begin());
}

bool SparsityPattern::operator==(const SparsityPattern& other) const {
  return dim_ == other.dim_ && col_ptr_ == other.col_ptr_ && row_idx_ == other.row_idx_;
}

SparsityPattern build_glmm_pattern(index_t n, index_t p, index_t m) {
  if (n < 1 || p < 1 || m < 0) throw std::invalid_argument("build_glmm_pattern: invalid sizes");
  const index_t dim = n * p + m;
  std::vector<nnz_t> col_ptr(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<index_t> row_idx;
  row_idx.reserve(static_cast<std::size_t>(n) * p * (p + 1) / 2 +
                  static_cast<std::size_t>(m) * n * p + static_cast<std::size_t>(m) * (m + 1) / 2);
  for (index_t j = 0; j < dim; ++j) {
    if (j < n * p) {
      const index_t block_end = (j / p + 1) * p;  // rest of this subject's block
      for (index_t r = j; r < block_end; ++r) row_idx.push_back(r);
      for (index_t r = n * p; r < dim; ++r) row_idx.push_back(r);  // global rows
    } else {
      for (index_t r = j; r < dim; ++r) row_idx.push_back(r);
    }
    col_ptr[j + 1] = static_cast<nnz_t>(row_idx.size());
  }
  return make_pattern_unchecked(dim, std::move(col_ptr), std::move(row_idx));
}

SparsityPattern build_ssm_pattern(index_t n, index_t k, index_t m) {
  if (n < 1 || k < 1 || k >= n || m < 0)
    throw std::invalid_argument("build_ssm_pattern: invalid sizes");
  const index_t dim = n + m;
  std::vector<nnz_t> col_ptr(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<index_t> row_idx;
  for (index_t j = 0; j < dim; ++j) {
    if (j < n) {
      const index_t band_end = std::min<index_t>(j + k, n - 1);
      for (index_t r = j; r <= band_end; ++r) row_idx.push_back(r);
      for (index_t r = n; r < dim; ++r) row_idx.push_back(r);
    } else {
      for (index_t r = j; r < dim; ++r) row_idx.push_back(r);
    }
    col_ptr[j + 1] = static_cast<nnz_t>(row_idx.size());
  }
  return make_pattern_unchecked(dim, std::move(col_ptr), std::move(row_idx));
}

SparsityPattern dense_lower_pattern(index_t dim) {
  check_dim(dim);
  std::vector<nnz_t> col_ptr(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<index_t> row_idx;
  row_idx.reserve(static_cast<std::size_t>(dim) * (dim + 1) / 2);
  for (index_t j = 0; j < dim; ++j) {
    for (index_t r = j; r < dim; ++r) row_idx.push_back(r);
    col_ptr[j + 1] = static_cast<nnz_t>(row_idx.size());
  }
  return make_pattern_unchecked(dim, std::move(col_ptr), std::move(row_idx));
}

SparsityPattern diagonal_pattern(index_t dim) {
  check_dim(dim);
  std::vector<nnz_t> col_ptr(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<index_t> row_idx(static_cast<std::size_t>(dim));
  for (index_t j = 0; j < dim; ++j) {
    row_idx[j] = j;
    col_ptr[j + 1] = j + 1;
  }
  return make_pattern_unchecked(dim, std::move(col_ptr), std::move(row_idx));
}

}  // namespace gva
