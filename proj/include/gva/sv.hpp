#pragma once

// Stochastic volatility state space model for mean-corrected returns y_t:
//   y_t ~ N(0, exp(lambda + sigma * b_t)),  t = 1..n,
//   b_1 ~ N(0, 1/(1 - phi^2)),  b_{t+1} | b_t ~ N(phi * b_t, 1),
// with sigma = exp(alpha), phi = logistic(psi), and normal priors on
// alpha, lambda, psi. Parameter vector: theta = (b_1, ..., b_n, alpha,
// lambda, psi).

#include <span>
#include <vector>

#include "gva/model.hpp"
#include "gva/types.hpp"

namespace gva {

struct SvSpec {
  std::vector<double> y;  // mean-corrected returns
  double sigma2_alpha = 100.0;
  double sigma2_lambda = 100.0;
  double sigma2_psi = 100.0;

  index_t n() const { return static_cast<index_t>(y.size()); }
  index_t dim() const { return n() + 3; }

  void validate() const;
};

class SvModel final : public TargetModel {
 public:
  explicit SvModel(SvSpec spec);

  index_t dim() const override { return spec_.dim(); }
  double log_h(std::span<const double> theta) const override;
  void grad_log_h(std::span<const double> theta, std::span<double> grad) const override;
  double log_h_and_grad(std::span<const double> theta, std::span<double> grad) const override;
  SparsityPattern recommended_pattern() const override;

  const SvSpec& spec() const { return spec_; }

 private:
  double eval(std::span<const double> theta, std::span<double>* grad) const;

  SvSpec spec_;
};

}  // namespace gva
