#pragma once

// Target model contract: an unnormalized posterior h(theta) = p(theta) p(y|theta)
// exposing its log density, gradient, and a recommended factor sparsity
// pattern. A non-finite log_h or gradient component signals an invalid
// parameter point (e.g. overflow); it is reported to the caller through the
// returned values, never by throwing.

#include <span>

#include "gva/sparsity.hpp"
#include "gva/types.hpp"

namespace gva {

class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual index_t dim() const = 0;

  virtual double log_h(std::span<const double> theta) const = 0;

  virtual void grad_log_h(std::span<const double> theta, std::span<double> grad) const = 0;

  // Single-pass evaluation of both; models override when the two share work.
  virtual double log_h_and_grad(std::span<const double> theta, std::span<double> grad) const {
    grad_log_h(theta, grad);
    return log_h(theta);
  }

  virtual SparsityPattern recommended_pattern() const = 0;
};

}  // namespace gva
