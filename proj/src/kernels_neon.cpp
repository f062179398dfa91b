// NEON kernel variants (aarch64). Same contract as the AVX2 unit:
// elementwise kernels are bit-identical to the scalar reference, reductions
// accumulate in 2 lanes.

#include <arm_neon.h>

#include <cassert>
#include <cmath>

#include "kernels_impl.hpp"

namespace gva::kernels::detail {
namespace {

double dot_neon(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x.data() + i), vld1q_f64(y.data() + i)));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double sum_sq_neon(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xv = vld1q_f64(x.data() + i);
    acc = vaddq_f64(acc, vmulq_f64(xv, xv));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) total += x[i] * x[i];
  return total;
}

void axpy_neon(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y.data() + i, vaddq_f64(vld1q_f64(y.data() + i), vmulq_f64(av, vld1q_f64(x.data() + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_neon(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  assert(x.size() == y.size() && x.size() == out.size());
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out.data() + i, vaddq_f64(vld1q_f64(x.data() + i), vld1q_f64(y.data() + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void adadelta_step_neon(std::span<const double> g, std::span<double> eg2,
                        std::span<double> edx2, std::span<double> delta, double rho,
                        double eps) {
  assert(g.size() == eg2.size() && g.size() == edx2.size() && g.size() == delta.size());
  const std::size_t n = g.size();
  const float64x2_t rho_v = vdupq_n_f64(rho);
  const float64x2_t omr_v = vdupq_n_f64(1.0 - rho);
  const float64x2_t eps_v = vdupq_n_f64(eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gv = vld1q_f64(g.data() + i);
    const float64x2_t eg2v = vld1q_f64(eg2.data() + i);
    const float64x2_t edx2v = vld1q_f64(edx2.data() + i);
    const float64x2_t eg2_new = vaddq_f64(vmulq_f64(rho_v, eg2v), vmulq_f64(omr_v, vmulq_f64(gv, gv)));
    const float64x2_t step =
        vdivq_f64(vsqrtq_f64(vaddq_f64(edx2v, eps_v)), vsqrtq_f64(vaddq_f64(eg2_new, eps_v)));
    const float64x2_t dv = vmulq_f64(step, gv);
    const float64x2_t edx2_new =
        vaddq_f64(vmulq_f64(rho_v, edx2v), vmulq_f64(omr_v, vmulq_f64(dv, dv)));
    vst1q_f64(eg2.data() + i, eg2_new);
    vst1q_f64(edx2.data() + i, edx2_new);
    vst1q_f64(delta.data() + i, dv);
  }
  const double one_minus_rho = 1.0 - rho;
  for (; i < n; ++i) {
    const double gi = g[i];
    const double eg2_new = rho * eg2[i] + one_minus_rho * (gi * gi);
    const double step = std::sqrt(edx2[i] + eps) / std::sqrt(eg2_new + eps);
    const double di = step * gi;
    eg2[i] = eg2_new;
    edx2[i] = rho * edx2[i] + one_minus_rho * (di * di);
    delta[i] = di;
  }
}

void neg_outer_at_neon(std::span<const index_t> rows, std::span<const index_t> cols,
                       std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
  assert(rows.size() == cols.size() && rows.size() == out.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i] = -(x[static_cast<std::size_t>(rows[i])] * y[static_cast<std::size_t>(cols[i])]);
  }
}

}  // namespace

const Variant& neon_variant() {
  static const Variant v{dot_neon, sum_sq_neon, axpy_neon, add_neon, adadelta_step_neon,
                         neg_outer_at_neon};
  return v;
}

}  // namespace gva::kernels::detail
