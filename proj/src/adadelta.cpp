#include "gva/adadelta.hpp"

#include <stdexcept>

#include "gva/kernels.hpp"

namespace gva {

AdadeltaAccumulator::AdadeltaAccumulator(std::size_t size, double rho, double eps)
    : eg2(size, 0.0), edx2(size, 0.0), rho(rho), eps(eps) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("AdadeltaAccumulator: rho in [0,1)");
  if (!(eps > 0.0)) throw std::invalid_argument("AdadeltaAccumulator: eps must be positive");
}

void AdadeltaAccumulator::step(std::span<const double> g, std::span<double> delta) {
  if (g.size() != eg2.size() || delta.size() != eg2.size())
    throw std::invalid_argument("AdadeltaAccumulator: length mismatch");
  kernels::adadelta_step(g, eg2, edx2, delta, rho, eps);
}

DenseVector AdadeltaAccumulator::step(std::span<const double> g) {
  DenseVector delta(g.size());
  step(g, std::span<double>(delta));
  return delta;
}

}  // namespace gva
