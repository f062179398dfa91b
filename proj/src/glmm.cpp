#include "gva/glmm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gva {

namespace {

// index of (i, j), i >= j, in the column-major vech of a p x p lower triangle
inline index_t vech_index(index_t i, index_t j, index_t p) {
  return j * p - j * (j - 1) / 2 + (i - j);
}

inline double h1_logit(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double h1p_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Inverse of a dense lower-triangular p x p matrix, row-major.
std::vector<double> invert_lower(const std::vector<double>& W, index_t p) {
  std::vector<double> inv(static_cast<std::size_t>(p) * p, 0.0);
  for (index_t c = 0; c < p; ++c) {
    inv[c * p + c] = 1.0 / W[c * p + c];
    for (index_t r = c + 1; r < p; ++r) {
      double acc = 0.0;
      for (index_t k = c; k < r; ++k) acc += W[r * p + k] * inv[k * p + c];
      inv[r * p + c] = -acc / W[r * p + r];
    }
  }
  return inv;
}

}  // namespace

std::vector<double> decode_zeta(std::span<const double> zeta, index_t p) {
  if (zeta.size() != static_cast<std::size_t>(p * (p + 1) / 2))
    throw std::invalid_argument("decode_zeta: length must be p(p+1)/2");
  std::vector<double> W(static_cast<std::size_t>(p) * p, 0.0);
  for (index_t j = 0; j < p; ++j) {
    for (index_t i = j; i < p; ++i) {
      const double v = zeta[static_cast<std::size_t>(vech_index(i, j, p))];
      W[i * p + j] = (i == j) ? std::exp(v) : v;
    }
  }
  return W;
}

std::vector<double> encode_zeta(std::span<const double> W, index_t p) {
  if (W.size() != static_cast<std::size_t>(p) * p)
    throw std::invalid_argument("encode_zeta: W must be p x p");
  std::vector<double> zeta(static_cast<std::size_t>(p * (p + 1) / 2));
  for (index_t j = 0; j < p; ++j) {
    for (index_t i = j; i < p; ++i) {
      const double v = W[i * p + j];
      zeta[static_cast<std::size_t>(vech_index(i, j, p))] = (i == j) ? std::log(v) : v;
    }
  }
  return zeta;
}

void GlmmSpec::validate() const {
  if (n_subjects < 1 || p < 1 || k_beta < 1)
    throw std::invalid_argument("GlmmSpec: n_subjects, p, k_beta must be positive");
  if (obs_offset.size() != static_cast<std::size_t>(n_subjects) + 1 || obs_offset.front() != 0 ||
      obs_offset.back() != n_obs())
    throw std::invalid_argument("GlmmSpec: bad obs_offset");
  for (index_t i = 0; i < n_subjects; ++i) {
    if (obs_offset[i + 1] <= obs_offset[i])
      throw std::invalid_argument("GlmmSpec: every subject needs at least one observation");
  }
  if (X.size() != static_cast<std::size_t>(n_obs()) * k_beta ||
      Z.size() != static_cast<std::size_t>(n_obs()) * p)
    throw std::invalid_argument("GlmmSpec: covariate array sizes inconsistent");
  if (!(sigma2_beta > 0.0) || !(sigma2_zeta > 0.0))
    throw std::invalid_argument("GlmmSpec: prior variances must be positive");
  for (double v : X)
    if (!std::isfinite(v)) throw std::invalid_argument("GlmmSpec: non-finite entry in X");
  for (double v : Z)
    if (!std::isfinite(v)) throw std::invalid_argument("GlmmSpec: non-finite entry in Z");
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("GlmmSpec: non-finite response");
    if (family == GlmmFamily::bernoulli_logit && v != 0.0 && v != 1.0)
      throw std::invalid_argument("GlmmSpec: Bernoulli responses must be 0 or 1");
    if (family == GlmmFamily::poisson_log && (v < 0.0 || v != std::floor(v)))
      throw std::invalid_argument("GlmmSpec: Poisson responses must be nonnegative integers");
  }
}

GlmmModel::GlmmModel(GlmmSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

SparsityPattern GlmmModel::recommended_pattern() const {
  return build_glmm_pattern(spec_.n_subjects, spec_.p, spec_.k_beta + spec_.zeta_len());
}

double GlmmModel::eval(std::span<const double> theta, std::span<double>* grad) const {
  const GlmmSpec& m = spec_;
  const index_t n = m.n_subjects, p = m.p, kb = m.k_beta, q = m.zeta_len();
  const std::size_t beta_off = static_cast<std::size_t>(n) * p;
  const std::size_t zeta_off = beta_off + kb;
  const double* b = theta.data();
  const double* beta = theta.data() + beta_off;
  const double* zeta = theta.data() + zeta_off;

  double* gb = nullptr;
  double* gbeta = nullptr;
  double* gzeta = nullptr;
  if (grad) {
    std::fill(grad->begin(), grad->end(), 0.0);
    gb = grad->data();
    gbeta = grad->data() + beta_off;
    gzeta = grad->data() + zeta_off;
  }

  const std::vector<double> W = decode_zeta(std::span<const double>(zeta, q), p);
  const std::vector<double> Winv = invert_lower(W, p);

  double logh = 0.0;

  // likelihood
  const bool poisson = m.family == GlmmFamily::poisson_log;
  for (index_t i = 0; i < n; ++i) {
    const double* bi = b + static_cast<std::size_t>(i) * p;
    for (nnz_t o = m.obs_offset[i]; o < m.obs_offset[i + 1]; ++o) {
      const double* xrow = m.X.data() + static_cast<std::size_t>(o) * kb;
      const double* zrow = m.Z.data() + static_cast<std::size_t>(o) * p;
      double eta = 0.0;
      for (index_t k = 0; k < kb; ++k) eta += xrow[k] * beta[k];
      for (index_t k = 0; k < p; ++k) eta += zrow[k] * bi[k];
      const double yo = m.y[static_cast<std::size_t>(o)];
      if (poisson) {
        logh += yo * eta - std::exp(eta);
      } else {
        logh += yo * eta - h1_logit(eta);
      }
      if (grad) {
        const double r = yo - (poisson ? std::exp(eta) : h1p_logit(eta));
        double* gbi = gb + static_cast<std::size_t>(i) * p;
        for (index_t k = 0; k < kb; ++k) gbeta[k] += r * xrow[k];
        for (index_t k = 0; k < p; ++k) gbi[k] += r * zrow[k];
      }
    }
  }

  // -n log|W| = -n * sum of zeta's diagonal entries
  for (index_t j = 0; j < p; ++j) logh -= n * zeta[vech_index(j, j, p)];

  // random-effect quadratic term and the zeta gradient's A matrix
  std::vector<double> c(static_cast<std::size_t>(p)), u(static_cast<std::size_t>(p));
  std::vector<double> A;  // lower triangle, row-major
  if (grad) A.assign(static_cast<std::size_t>(p) * p, 0.0);
  for (index_t i = 0; i < n; ++i) {
    const double* bi = b + static_cast<std::size_t>(i) * p;
    for (index_t r = 0; r < p; ++r) {
      double acc = 0.0;
      for (index_t k = 0; k <= r; ++k) acc += Winv[r * p + k] * bi[k];
      c[r] = acc;  // c = W^{-1} b_i
    }
    for (index_t r = 0; r < p; ++r) logh -= 0.5 * c[r] * c[r];
    if (grad) {
      for (index_t r = 0; r < p; ++r) {
        double acc = 0.0;
        for (index_t k = r; k < p; ++k) acc += Winv[k * p + r] * c[k];
        u[r] = acc;  // u = W^{-T} W^{-1} b_i
      }
      double* gbi = gb + static_cast<std::size_t>(i) * p;
      for (index_t r = 0; r < p; ++r) gbi[r] -= u[r];
      for (index_t r = 0; r < p; ++r) {
        for (index_t cc = 0; cc <= r; ++cc) A[r * p + cc] += u[r] * c[cc];
      }
    }
  }

  // priors
  for (index_t k = 0; k < kb; ++k) {
    logh -= 0.5 * beta[k] * beta[k] / m.sigma2_beta;
    if (grad) gbeta[k] -= beta[k] / m.sigma2_beta;
  }
  for (index_t k = 0; k < q; ++k) logh -= 0.5 * zeta[k] * zeta[k] / m.sigma2_zeta;

  if (grad) {
    for (index_t j = 0; j < p; ++j) {
      for (index_t i = j; i < p; ++i) {
        const index_t k = vech_index(i, j, p);
        const bool diag = i == j;
        const double one_zeta = diag ? std::exp(zeta[k]) : 1.0;
        gzeta[k] = (diag ? -static_cast<double>(n) : 0.0) + one_zeta * A[i * p + j] -
                   zeta[k] / m.sigma2_zeta;
      }
    }
  }
  return logh;
}

double GlmmModel::log_h(std::span<const double> theta) const { return eval(theta, nullptr); }

void GlmmModel::grad_log_h(std::span<const double> theta, std::span<double> grad) const {
  eval(theta, &grad);
}

double GlmmModel::log_h_and_grad(std::span<const double> theta, std::span<double> grad) const {
  return eval(theta, &grad);
}

}  // namespace gva
