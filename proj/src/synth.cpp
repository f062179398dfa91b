#include "gva/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "gva/rng.hpp"

namespace gva {

bool gaussian_target_kind_from_string(std::string_view name, GaussianTargetKind& out) {
  if (name == "identity") {
    out = GaussianTargetKind::identity;
  } else if (name == "band") {
    out = GaussianTargetKind::band;
  } else if (name == "blockarrow") {
    out = GaussianTargetKind::blockarrow;
  } else {
    return false;
  }
  return true;
}

const char* to_string(GaussianTargetKind kind) {
  switch (kind) {
    case GaussianTargetKind::identity: return "identity";
    case GaussianTargetKind::band: return "band";
    case GaussianTargetKind::blockarrow: return "blockarrow";
  }
  return "?";
}

GaussianTargetSpec make_gaussian_target(GaussianTargetKind kind, index_t dim, std::uint64_t seed) {
  if (dim < 5) throw std::invalid_argument("make_gaussian_target: dim must be >= 5");
  PatternPtr pattern;
  switch (kind) {
    case GaussianTargetKind::identity:
    case GaussianTargetKind::band:
      pattern = share(build_ssm_pattern(dim - 3, 1, 3));
      break;
    case GaussianTargetKind::blockarrow: {
      // blocks of size 2 plus a 4-wide arrow (dim = 2n + 4)
      if (dim % 2 != 0 || dim < 8)
        throw std::invalid_argument("make_gaussian_target: blockarrow dim must be even and >= 8");
      pattern = share(build_glmm_pattern((dim - 4) / 2, 2, 4));
      break;
    }
  }

  CholeskyFactor factor = CholeskyFactor::identity(pattern);
  DenseVector mean(static_cast<std::size_t>(dim), 0.0);
  if (kind != GaussianTargetKind::identity) {
    // Mild conditioning keeps the fixed-point iteration of the optimizer
    // stable: diagonal near 1, small off-diagonal entries.
    Rng rng(seed);
    auto values = factor.values();
    const SparsityPattern& p = *pattern;
    for (index_t j = 0; j < dim; ++j) {
      for (nnz_t e = p.col_ptr()[j]; e < p.col_ptr()[j + 1]; ++e) {
        const bool diag = e == p.diag_pos(j);
        values[static_cast<std::size_t>(e)] =
            diag ? 0.8 + 0.5 * rng.uniform() : 0.4 * (2.0 * rng.uniform() - 1.0);
      }
    }
    for (double& m : mean) m = 2.0 * rng.uniform() - 1.0;
  }
  return GaussianTargetSpec{std::move(mean), std::move(factor)};
}

namespace {

GlmmSpec make_glmm(GlmmFamily family, index_t n_subjects, index_t n_per_subject, index_t k_beta,
                   std::uint64_t seed) {
  if (n_subjects < 1 || n_per_subject < 1 || k_beta < 1)
    throw std::invalid_argument("make_glmm: sizes must be positive");
  Rng rng(seed);
  GlmmSpec spec;
  spec.family = family;
  spec.n_subjects = n_subjects;
  spec.p = 1;
  spec.k_beta = k_beta;
  const nnz_t n_obs = static_cast<nnz_t>(n_subjects) * n_per_subject;
  spec.obs_offset.resize(static_cast<std::size_t>(n_subjects) + 1);
  for (index_t i = 0; i <= n_subjects; ++i)
    spec.obs_offset[i] = static_cast<nnz_t>(i) * n_per_subject;
  spec.y.resize(static_cast<std::size_t>(n_obs));
  spec.X.resize(static_cast<std::size_t>(n_obs) * k_beta);
  spec.Z.assign(static_cast<std::size_t>(n_obs), 1.0);

  DenseVector beta(static_cast<std::size_t>(k_beta));
  for (double& b : beta) b = 0.8 * rng.normal();
  const double sd_b = 0.9;

  const bool poisson = family == GlmmFamily::poisson_log;
  for (index_t i = 0; i < n_subjects; ++i) {
    const double bi = sd_b * rng.normal();
    for (index_t j = 0; j < n_per_subject; ++j) {
      const std::size_t o = static_cast<std::size_t>(i) * n_per_subject + j;
      double eta = bi;
      for (index_t k = 0; k < k_beta; ++k) {
        const double x = k == 0 ? 1.0 : rng.normal();
        spec.X[o * k_beta + k] = x;
        eta += beta[k] * x;
      }
      if (poisson) {
        // inverse-CDF draw by summing exponential gaps
        const double mu = std::exp(std::min(eta, 4.0));
        double acc = -std::log(rng.uniform()) / mu;
        double count = 0;
        while (acc < 1.0 && count < 1000) {
          acc += -std::log(rng.uniform()) / mu;
          count += 1;
        }
        spec.y[o] = count;
      } else {
        spec.y[o] = rng.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
      }
    }
  }
  return spec;
}

}  // namespace

GlmmSpec make_logistic_glmm(index_t n_subjects, index_t n_per_subject, index_t k_beta,
                            std::uint64_t seed) {
  return make_glmm(GlmmFamily::bernoulli_logit, n_subjects, n_per_subject, k_beta, seed);
}

GlmmSpec make_poisson_glmm(index_t n_subjects, index_t n_per_subject, index_t k_beta,
                           std::uint64_t seed) {
  return make_glmm(GlmmFamily::poisson_log, n_subjects, n_per_subject, k_beta, seed);
}

SvSpec make_sv_series(index_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_sv_series: n must be >= 2");
  Rng rng(seed);
  const double phi = 0.97, sigma = 0.15, lambda = -0.5;
  SvSpec spec;
  spec.y.resize(static_cast<std::size_t>(n));
  double b = rng.normal() / std::sqrt(1.0 - phi * phi);
  double sum = 0.0;
  for (index_t t = 0; t < n; ++t) {
    spec.y[t] = rng.normal() * std::exp(0.5 * (lambda + sigma * b));
    sum += spec.y[t];
    b = phi * b + rng.normal();
  }
  const double mean = sum / n;
  for (double& v : spec.y) v -= mean;  // mean-corrected, as the model assumes
  return spec;
}

}  // namespace gva
