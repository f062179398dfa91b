#pragma once

// Diagnostic multivariate normal target N(mu*, (T* T*')^{-1}) with a sparse
// precision factor T*. log_h carries its own normalizing constant, so the
// lower bound of an exact fit is 0.

#include <span>

#include "gva/factor.hpp"
#include "gva/model.hpp"

namespace gva {

struct GaussianTargetSpec {
  DenseVector mean;
  CholeskyFactor factor;  // T*, precision Cholesky

  void validate() const;
};

class GaussianTargetModel final : public TargetModel {
 public:
  explicit GaussianTargetModel(GaussianTargetSpec spec);

  index_t dim() const override { return spec_.factor.dim(); }
  double log_h(std::span<const double> theta) const override;
  void grad_log_h(std::span<const double> theta, std::span<double> grad) const override;
  double log_h_and_grad(std::span<const double> theta, std::span<double> grad) const override;
  SparsityPattern recommended_pattern() const override;

  const GaussianTargetSpec& spec() const { return spec_; }

 private:
  GaussianTargetSpec spec_;
  double log_norm_const_;  // log|T*| - (d/2) log(2 pi)
};

}  // namespace gva
