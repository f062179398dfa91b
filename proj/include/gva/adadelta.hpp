#pragma once

// ADADELTA per-parameter step sizes from exponentially decaying averages of
// squared gradients and squared updates.

#include <span>

#include "gva/types.hpp"

namespace gva {

struct AdadeltaAccumulator {
  DenseVector eg2;   // running average of squared gradients
  DenseVector edx2;  // running average of squared updates
  double rho;
  double eps;

  explicit AdadeltaAccumulator(std::size_t size, double rho = 0.95, double eps = 1e-6);

  std::size_t size() const { return eg2.size(); }

  // Computes the update delta for gradient g and advances both averages.
  void step(std::span<const double> g, std::span<double> delta);

  DenseVector step(std::span<const double> g);
};

}  // namespace gva
