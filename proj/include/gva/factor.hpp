#pragma once

// Sparse lower-triangular Cholesky factor: values stored only at pattern
// positions, strictly positive diagonal. The same type holds the precision
// factor T (Algorithm 2) and the scale factor L (Algorithm 1, with a dense
// or diagonal pattern).

#include <iosfwd>
#include <span>

#include "gva/sparsity.hpp"
#include "gva/types.hpp"

namespace gva {

class CholeskyFactor {
 public:
  CholeskyFactor(PatternPtr pattern, std::vector<double> values);

  // Identity factor on the given pattern (diagonal 1, off-diagonals 0).
  static CholeskyFactor identity(PatternPtr pattern);

  const SparsityPattern& pattern() const { return *pattern_; }
  const PatternPtr& pattern_ptr() const { return pattern_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double diag(index_t j) const { return values_[static_cast<std::size_t>(pattern_->diag_pos(j))]; }
  index_t dim() const { return pattern_->dim(); }

  // Throws if any diagonal value is not strictly positive and finite.
  void validate() const;

 private:
  PatternPtr pattern_;
  std::vector<double> values_;
};

// Solves T x = g by forward substitution. Cost proportional to nnz.
DenseVector solve_direct(const CholeskyFactor& T, std::span<const double> g);

// Solves T^T x = s by back substitution. Cost proportional to nnz.
DenseVector solve_transposed(const CholeskyFactor& T, std::span<const double> s);

// y = T s, touching only pattern entries.
DenseVector multiply(const CholeskyFactor& T, std::span<const double> s);

// y = T^T s.
DenseVector multiply_transposed(const CholeskyFactor& T, std::span<const double> s);

// In-place overloads reusing caller storage (the fit loop's hot path).
void solve_direct(const CholeskyFactor& T, std::span<const double> g, std::span<double> x);
void solve_transposed(const CholeskyFactor& T, std::span<const double> s, std::span<double> x);
void multiply(const CholeskyFactor& T, std::span<const double> s, std::span<double> y);
void multiply_transposed(const CholeskyFactor& T, std::span<const double> s, std::span<double> y);

// diag(T^{-T} T^{-1}): marginal variances when T factors the precision,
// computed by dim() triangular solves against unit vectors.
DenseVector marginal_variances(const CholeskyFactor& T);

// diag(L L^T): marginal variances when L factors the covariance.
DenseVector marginal_variances_covariance(const CholeskyFactor& L);

// sum_j log T_jj
double log_det(const CholeskyFactor& T);

// Plain-text triplet serialization: header "d nnz", then "row col value"
// per entry in canonical order, 1-based indices. A bare pattern uses the
// same format with value 1 on every entry.
void save_triplets(std::ostream& os, const CholeskyFactor& factor);
CholeskyFactor load_triplets(std::istream& is);
void save_pattern(std::ostream& os, const SparsityPattern& pattern);
SparsityPattern load_pattern(std::istream& is);

// Running count of pattern entries touched by solves/multiplies/outer
// products on this thread, for the complexity assertions and benchmarks.
nnz_t touched_nonzeros();
void reset_touched_nonzeros();

namespace detail {
void count_touches(nnz_t n);
}

}  // namespace gva
