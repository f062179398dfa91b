// Scalar reference kernels. These define the semantics the SIMD variants
// must reproduce.

#include <cassert>
#include <cmath>

#include "kernels_impl.hpp"

namespace gva::kernels::detail {
namespace {

double dot_scalar(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_scalar(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

void axpy_scalar(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void add_scalar(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  assert(x.size() == y.size() && x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
}

void adadelta_step_scalar(std::span<const double> g, std::span<double> eg2,
                          std::span<double> edx2, std::span<double> delta, double rho,
                          double eps) {
  assert(g.size() == eg2.size() && g.size() == edx2.size() && g.size() == delta.size());
  const double one_minus_rho = 1.0 - rho;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gi = g[i];
    const double eg2_new = rho * eg2[i] + one_minus_rho * (gi * gi);
    const double step = std::sqrt(edx2[i] + eps) / std::sqrt(eg2_new + eps);
    const double di = step * gi;
    eg2[i] = eg2_new;
    edx2[i] = rho * edx2[i] + one_minus_rho * (di * di);
    delta[i] = di;
  }
}

void neg_outer_at_scalar(std::span<const index_t> rows, std::span<const index_t> cols,
                         std::span<const double> x, std::span<const double> y,
                         std::span<double> out) {
  assert(rows.size() == cols.size() && rows.size() == out.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i] = -(x[static_cast<std::size_t>(rows[i])] * y[static_cast<std::size_t>(cols[i])]);
  }
}

}  // namespace

const Variant& scalar_variant() {
  static const Variant v{dot_scalar,          sum_sq_scalar, axpy_scalar,
                         add_scalar,          adadelta_step_scalar,
                         neg_outer_at_scalar};
  return v;
}

}  // namespace gva::kernels::detail
