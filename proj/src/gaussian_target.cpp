#include "gva/gaussian_target.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gva/kernels.hpp"

namespace gva {

void GaussianTargetSpec::validate() const {
  if (mean.size() != static_cast<std::size_t>(factor.dim()))
    throw std::invalid_argument("GaussianTargetSpec: mean length != factor dim");
  factor.validate();
}

GaussianTargetModel::GaussianTargetModel(GaussianTargetSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  log_norm_const_ =
      log_det(spec_.factor) - 0.5 * spec_.factor.dim() * std::log(2.0 * std::numbers::pi);
}

double GaussianTargetModel::log_h(std::span<const double> theta) const {
  const std::size_t d = spec_.mean.size();
  DenseVector w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = theta[i] - spec_.mean[i];
  DenseVector m = multiply_transposed(spec_.factor, w);
  return log_norm_const_ - 0.5 * kernels::sum_sq(m);
}

void GaussianTargetModel::grad_log_h(std::span<const double> theta, std::span<double> grad) const {
  const std::size_t d = spec_.mean.size();
  DenseVector w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = theta[i] - spec_.mean[i];
  DenseVector m = multiply_transposed(spec_.factor, w);
  multiply(spec_.factor, m, grad);
  for (std::size_t i = 0; i < d; ++i) grad[i] = -grad[i];
}

double GaussianTargetModel::log_h_and_grad(std::span<const double> theta,
                                           std::span<double> grad) const {
  const std::size_t d = spec_.mean.size();
  DenseVector w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = theta[i] - spec_.mean[i];
  DenseVector m = multiply_transposed(spec_.factor, w);
  multiply(spec_.factor, m, grad);
  for (std::size_t i = 0; i < d; ++i) grad[i] = -grad[i];
  return log_norm_const_ - 0.5 * kernels::sum_sq(m);
}

SparsityPattern GaussianTargetModel::recommended_pattern() const {
  return spec_.factor.pattern();
}

}  // namespace gva
