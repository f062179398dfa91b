#pragma once

// Seeded synthetic problem instances for diagnostics and benchmarks: Gaussian
// targets with known (mu*, T*), logistic GLMM data, and SV return series.

#include <cstdint>
#include <string_view>

#include "gva/gaussian_target.hpp"
#include "gva/glmm.hpp"
#include "gva/sv.hpp"

namespace gva {

enum class GaussianTargetKind { identity, band, blockarrow };

bool gaussian_target_kind_from_string(std::string_view name, GaussianTargetKind& out);
const char* to_string(GaussianTargetKind kind);

// Well-conditioned random target on a band (SSM k=1, m=3) or block-arrow
// (GLMM-style) pattern of the requested dimension. `identity` gives mu* = 0,
// T* = I on the band pattern, for which family-2 gradients cancel bit-exactly
// at the optimum.
GaussianTargetSpec make_gaussian_target(GaussianTargetKind kind, index_t dim, std::uint64_t seed);

// Logistic random-intercept GLMM with k_beta fixed effects and n_i
// observations per subject, responses drawn from the model itself.
GlmmSpec make_logistic_glmm(index_t n_subjects, index_t n_per_subject, index_t k_beta,
                            std::uint64_t seed);

// Poisson random-intercept GLMM (log link).
GlmmSpec make_poisson_glmm(index_t n_subjects, index_t n_per_subject, index_t k_beta,
                           std::uint64_t seed);

// Mean-corrected return series of length n drawn from the SV model.
SvSpec make_sv_series(index_t n, std::uint64_t seed);

}  // namespace gva
