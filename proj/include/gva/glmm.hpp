#pragma once

// Generalized linear mixed models with per-subject random effects:
//   g(E[y_ij]) = X_ij' beta + Z_ij' b_i,   b_i ~ N(0, G),  G = W W',
// Bernoulli responses with logit link or Poisson responses with log link.
// The random-effect scale is parameterized by zeta = vech(W*) where W* is W
// with log-transformed diagonal, with normal priors on beta and zeta.
//
// Parameter vector layout: theta = (b_1, ..., b_n, beta, zeta).

#include <span>
#include <vector>

#include "gva/model.hpp"
#include "gva/types.hpp"

namespace gva {

enum class GlmmFamily { bernoulli_logit, poisson_log };

struct GlmmSpec {
  GlmmFamily family = GlmmFamily::bernoulli_logit;
  index_t n_subjects = 0;
  index_t p = 0;       // random-effect dimension
  index_t k_beta = 0;  // fixed-effect dimension
  std::vector<nnz_t> obs_offset;  // n_subjects + 1, CSR-style into the arrays below
  std::vector<double> y;          // responses, one per observation
  std::vector<double> X;          // row-major n_obs x k_beta
  std::vector<double> Z;          // row-major n_obs x p
  double sigma2_beta = 100.0;
  double sigma2_zeta = 100.0;

  nnz_t n_obs() const { return static_cast<nnz_t>(y.size()); }
  index_t zeta_len() const { return p * (p + 1) / 2; }
  index_t dim() const { return n_subjects * p + k_beta + zeta_len(); }

  // Throws std::invalid_argument on inconsistent sizes, non-finite data,
  // n_i < 1, non-positive prior variances, or responses outside the family's
  // support (0/1 for Bernoulli, nonnegative integers for Poisson).
  void validate() const;
};

// vech^{-1} then exponentiate the diagonal: zeta (length p(p+1)/2, column-major
// stacking of the lower triangle) -> dense p x p lower-triangular W, row-major.
std::vector<double> decode_zeta(std::span<const double> zeta, index_t p);

// Inverse of decode_zeta.
std::vector<double> encode_zeta(std::span<const double> W, index_t p);

class GlmmModel final : public TargetModel {
 public:
  explicit GlmmModel(GlmmSpec spec);

  index_t dim() const override { return spec_.dim(); }
  double log_h(std::span<const double> theta) const override;
  void grad_log_h(std::span<const double> theta, std::span<double> grad) const override;
  double log_h_and_grad(std::span<const double> theta, std::span<double> grad) const override;
  SparsityPattern recommended_pattern() const override;

  const GlmmSpec& spec() const { return spec_; }

 private:
  double eval(std::span<const double> theta, std::span<double>* grad) const;

  GlmmSpec spec_;
};

}  // namespace gva
