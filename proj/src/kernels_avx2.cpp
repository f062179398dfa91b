// AVX2 kernel variants. Elementwise kernels mirror the scalar reference
// operation-for-operation (mul/add/sqrt/div, no FMA) so results are
// bit-identical; reductions use 4-lane accumulation.

#include <immintrin.h>

#include <cassert>
#include <cmath>

#include "kernels_impl.hpp"

namespace gva::kernels::detail {
namespace {

double dot_avx2(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d yv = _mm256_loadu_pd(y.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double sum_sq_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, xv));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += x[i] * x[i];
  return total;
}

void axpy_avx2(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d yv = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_avx2(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  assert(x.size() == y.size() && x.size() == out.size());
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d yv = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(xv, yv));
  }
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void adadelta_step_avx2(std::span<const double> g, std::span<double> eg2,
                        std::span<double> edx2, std::span<double> delta, double rho,
                        double eps) {
  assert(g.size() == eg2.size() && g.size() == edx2.size() && g.size() == delta.size());
  const std::size_t n = g.size();
  const __m256d rho_v = _mm256_set1_pd(rho);
  const __m256d omr_v = _mm256_set1_pd(1.0 - rho);
  const __m256d eps_v = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g.data() + i);
    const __m256d eg2v = _mm256_loadu_pd(eg2.data() + i);
    const __m256d edx2v = _mm256_loadu_pd(edx2.data() + i);
    const __m256d eg2_new =
        _mm256_add_pd(_mm256_mul_pd(rho_v, eg2v), _mm256_mul_pd(omr_v, _mm256_mul_pd(gv, gv)));
    const __m256d step = _mm256_div_pd(_mm256_sqrt_pd(_mm256_add_pd(edx2v, eps_v)),
                                       _mm256_sqrt_pd(_mm256_add_pd(eg2_new, eps_v)));
    const __m256d dv = _mm256_mul_pd(step, gv);
    const __m256d edx2_new =
        _mm256_add_pd(_mm256_mul_pd(rho_v, edx2v), _mm256_mul_pd(omr_v, _mm256_mul_pd(dv, dv)));
    _mm256_storeu_pd(eg2.data() + i, eg2_new);
    _mm256_storeu_pd(edx2.data() + i, edx2_new);
    _mm256_storeu_pd(delta.data() + i, dv);
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

void neg_outer_at_avx2(std::span<const index_t> rows, std::span<const index_t> cols,
                       std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
  assert(rows.size() == cols.size() && rows.size() == out.size());
  const std::size_t n = rows.size();
  const __m256d signmask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i ri = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rows.data() + i));
    const __m128i ci = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols.data() + i));
    const __m256d xv = _mm256_i32gather_pd(x.data(), ri, 8);
    const __m256d yv = _mm256_i32gather_pd(y.data(), ci, 8);
    _mm256_storeu_pd(out.data() + i, _mm256_xor_pd(_mm256_mul_pd(xv, yv), signmask));
  }
  for (; i < n; ++i) {
    out[i] = -(x[static_cast<std::size_t>(rows[i])] * y[static_cast<std::size_t>(cols[i])]);
  }
}

}  // namespace

const Variant& avx2_variant() {
  static const Variant v{dot_avx2, sum_sq_avx2, axpy_avx2, add_avx2, adadelta_step_avx2,
                         neg_outer_at_avx2};
  return v;
}

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

}  // namespace gva::kernels::detail
