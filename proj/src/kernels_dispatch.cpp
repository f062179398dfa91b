// Runtime kernel selection. The best available variant is picked once at
// startup; GVA_KERNELS=scalar|avx2|neon|auto overrides, as does force_isa()
// (used by the equivalence tests).

#include <atomic>
#include <cstdlib>

#include "kernels_impl.hpp"

namespace gva::kernels {
namespace {

using detail::Variant;

struct Active {
  const Variant* variant;
  Isa isa;
};

Active pick(Isa wanted) {
#if defined(GVA_HAVE_AVX2_SOURCES)
  if ((wanted == Isa::avx2) && detail::avx2_supported()) return {&detail::avx2_variant(), Isa::avx2};
#endif
#if defined(GVA_HAVE_NEON_SOURCES)
  if (wanted == Isa::neon) return {&detail::neon_variant(), Isa::neon};
#endif
  (void)wanted;
  return {&detail::scalar_variant(), Isa::scalar};
}

Active pick_auto() {
#if defined(GVA_HAVE_AVX2_SOURCES)
  if (detail::avx2_supported()) return {&detail::avx2_variant(), Isa::avx2};
#endif
#if defined(GVA_HAVE_NEON_SOURCES)
  return {&detail::neon_variant(), Isa::neon};
#endif
  return {&detail::scalar_variant(), Isa::scalar};
}

Active initial() {
  if (const char* env = std::getenv("GVA_KERNELS")) {
    const std::string_view name{env};
    if (name == "scalar") return pick(Isa::scalar);
    if (name == "avx2") return pick(Isa::avx2);
    if (name == "neon") return pick(Isa::neon);
  }
  return pick_auto();
}

Active& active() {
  static Active a = initial();
  return a;
}

}  // namespace

Isa active_isa() { return active().isa; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool force_isa(std::string_view name) {
  if (name == "auto") {
    active() = pick_auto();
    return true;
  }
  Isa wanted;
  if (name == "scalar") {
    wanted = Isa::scalar;
  } else if (name == "avx2") {
    wanted = Isa::avx2;
  } else if (name == "neon") {
    wanted = Isa::neon;
  } else {
    return false;
  }
  const Active picked = pick(wanted);
  if (picked.isa != wanted) return false;
  active() = picked;
  return true;
}

double dot(std::span<const double> x, std::span<const double> y) { return active().variant->dot(x, y); }

double sum_sq(std::span<const double> x) { return active().variant->sum_sq(x); }

void axpy(double a, std::span<const double> x, std::span<double> y) { active().variant->axpy(a, x, y); }

void add(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  active().variant->add(x, y, out);
}

void adadelta_step(std::span<const double> g, std::span<double> eg2, std::span<double> edx2,
                   std::span<double> delta, double rho, double eps) {
  active().variant->adadelta_step(g, eg2, edx2, delta, rho, eps);
}

void neg_outer_at(std::span<const index_t> rows, std::span<const index_t> cols,
                  std::span<const double> x, std::span<const double> y, std::span<double> out) {
  active().variant->neg_outer_at(rows, cols, x, y, out);
}

}  // namespace gva::kernels
