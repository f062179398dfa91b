#pragma once

// Data-parallel arithmetic kernels used by the optimizer inner loop.
//
// Every kernel has a scalar reference implementation; on x86-64 an AVX2
// variant and on aarch64 a NEON variant are compiled in and selected at
// runtime. Elementwise kernels (adadelta_step, add, axpy, neg_outer_at)
// produce bit-identical results across variants because each output element
// is computed by the same sequence of IEEE operations. Reductions (dot,
// sum_sq) accumulate in lanes and may differ from the scalar result in the
// last few ulps.

#include <cstddef>
#include <span>
#include <string_view>

#include "gva/types.hpp"

namespace gva::kernels {

enum class Isa { scalar, avx2, neon };

// The variant currently dispatched to.
Isa active_isa();

// Force a variant ("scalar", "avx2", "neon", "auto"). Returns false if the
// requested variant is not available on this machine. The GVA_KERNELS
// environment variable applies the same override at startup.
bool force_isa(std::string_view name);

const char* isa_name(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
double sum_sq(std::span<const double> x);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

// out = x + y
void add(std::span<const double> x, std::span<const double> y, std::span<double> out);

// One ADADELTA update for a parameter group:
//   eg2   <- rho * eg2 + (1 - rho) * g^2
//   delta <- (sqrt(edx2 + eps) / sqrt(eg2 + eps)) * g
//   edx2  <- rho * edx2 + (1 - rho) * delta^2
// All componentwise; delta is written, eg2/edx2 updated in place.
void adadelta_step(std::span<const double> g, std::span<double> eg2, std::span<double> edx2,
                   std::span<double> delta, double rho, double eps);

// out[i] = -x[rows[i]] * y[cols[i]] — an outer product materialized only at
// the given positions.
void neg_outer_at(std::span<const index_t> rows, std::span<const index_t> cols,
                  std::span<const double> x, std::span<const double> y, std::span<double> out);

}  // namespace gva::kernels
