#include "gva/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

#include "gva/rng.hpp"

namespace gva {

DenseVector finite_difference_gradient(const TargetModel& model, std::span<const double> theta,
                                       double step) {
  const index_t d = model.dim();
  DenseVector point(theta.begin(), theta.end());
  DenseVector grad(static_cast<std::size_t>(d));
  for (index_t i = 0; i < d; ++i) {
    const double orig = point[i];
    point[i] = orig + step;
    const double up = model.log_h(point);
    point[i] = orig - step;
    const double down = model.log_h(point);
    point[i] = orig;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

GradCheckReport gradcheck(const TargetModel& model, std::vector<GradCheckBlock> blocks,
                          int points, double step, std::uint64_t seed, double spread) {
  if (points < 1) throw std::invalid_argument("gradcheck: points must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("gradcheck: step must be positive");
  const index_t d = model.dim();

  GradCheckReport report;
  report.points = points;
  report.step = step;
  for (const auto& b : blocks) {
    if (b.begin < 0 || b.end > d || b.begin >= b.end)
      throw std::invalid_argument("gradcheck: bad block range for " + b.name);
    report.blocks.push_back({b.name, 0.0, b.begin});
  }

  Rng rng(seed);
  DenseVector theta(static_cast<std::size_t>(d));
  DenseVector analytic(static_cast<std::size_t>(d));
  for (int pt = 0; pt < points; ++pt) {
    for (double& v : theta) v = spread * rng.normal();
    model.grad_log_h(theta, analytic);
    const DenseVector numeric = finite_difference_gradient(model, theta, step);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      const auto& b = blocks[bi];
      auto& rep = report.blocks[bi];
      for (index_t i = b.begin; i < b.end; ++i) {
        const double a = analytic[i];
        const double n = numeric[i];
        const double rel = std::abs(a - n) / std::max({1.0, std::abs(a), std::abs(n)});
        if (rel > rep.max_rel_error) {
          rep.max_rel_error = rel;
          rep.worst_component = i;
        }
      }
    }
  }
  for (const auto& rep : report.blocks)
    report.max_rel_error = std::max(report.max_rel_error, rep.max_rel_error);
  return report;
}

std::vector<GradCheckBlock> whole_vector_block(index_t dim) {
  return {GradCheckBlock{"theta", 0, dim}};
}

}  // namespace gva
