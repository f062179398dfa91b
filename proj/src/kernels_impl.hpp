#pragma once

// Internal kernel variant tables shared by the dispatch unit and the
// per-ISA translation units.

#include <span>

#include "gva/kernels.hpp"

namespace gva::kernels::detail {

struct Variant {
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*sum_sq)(std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*add)(std::span<const double>, std::span<const double>, std::span<double>);
  void (*adadelta_step)(std::span<const double>, std::span<double>, std::span<double>,
                        std::span<double>, double, double);
  void (*neg_outer_at)(std::span<const index_t>, std::span<const index_t>,
                       std::span<const double>, std::span<const double>, std::span<double>);
};

const Variant& scalar_variant();

#if defined(GVA_HAVE_AVX2_SOURCES)
const Variant& avx2_variant();
bool avx2_supported();
#endif
#if defined(GVA_HAVE_NEON_SOURCES)
const Variant& neon_variant();
#endif

}  // namespace gva::kernels::detail
