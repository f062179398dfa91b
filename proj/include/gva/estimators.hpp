#pragma once

// Reparameterization-trick gradient estimators for the Gaussian variational
// lower bound, in both parameterizations:
//
//   precision route (Algorithm 2):  theta = mu + T^{-T} s,  Omega = T T'
//   covariance route (Algorithm 1): theta = mu + L s,       Sigma = L L'
//
// Family 1 uses the analytic entropy gradient; family 2 replaces it with the
// sampled score, which cancels the target gradient exactly at a Gaussian
// optimum and empirically has much lower variance near the mode.

#include <cstdint>
#include <span>

#include "gva/factor.hpp"
#include "gva/model.hpp"
#include "gva/types.hpp"

namespace gva {

enum class Estimator { family1 = 1, family2 = 2 };

struct GradientEstimate {
  DenseVector theta;
  DenseVector g_mu;
  DenseVector g_factor;  // aligned with the factor's pattern
  double log_h = 0.0;
  bool finite = true;  // log_h and every gradient component are finite
};

// Workspace reused across iterations by the fit loop.
struct EstimatorWorkspace {
  DenseVector x;  // T^{-T} s  (precision)  /  L s  (covariance)
  DenseVector y;  // T^{-1} g               /  L^{-T} s
};

// Precision-factor estimators:
//   family 1: g_mu = grad log h(theta)
//             g_T  = -x (T^{-1} g_mu)' - diag(1/T_jj),  x = T^{-T} s
//   family 2: g_mu = grad log h(theta) + T s
//             g_T  = -x (T^{-1} g_mu)'
// The outer products are materialized only at pattern positions.
void estimate_gradients(std::span<const double> mu, const CholeskyFactor& T,
                        const TargetModel& model, std::span<const double> s, Estimator family,
                        GradientEstimate& out, EstimatorWorkspace& ws);

GradientEstimate estimate_gradients(std::span<const double> mu, const CholeskyFactor& T,
                                    const TargetModel& model, std::span<const double> s,
                                    Estimator family);

// Covariance-factor (Algorithm 1) estimators:
//   family 1: g_mu = grad log h(theta);          g_L = g_mu s' + diag(1/L_jj)
//   family 2: g_mu = grad log h(theta) + L^{-T}s; g_L = g_mu s'
void estimate_gradients_covariance(std::span<const double> mu, const CholeskyFactor& L,
                                   const TargetModel& model, std::span<const double> s,
                                   Estimator family, GradientEstimate& out,
                                   EstimatorWorkspace& ws);

GradientEstimate estimate_gradients_covariance(std::span<const double> mu,
                                               const CholeskyFactor& L, const TargetModel& model,
                                               std::span<const double> s, Estimator family);

// Chain rule from T to T' (T'_jj = log T_jj): diagonal entries of g are
// multiplied by T_jj, off-diagonal entries pass through.
void chain_to_tprime(const CholeskyFactor& T, std::span<double> g);

// Unbiased single-draw lower bound estimate
//   precision:  log h(theta) + (d/2) log(2 pi) - log|T| + s's/2
//   covariance: log h(theta) + (d/2) log(2 pi) + log|L| + s's/2
// The s's/2 term is kept stochastic so it cancels against log h near the mode.
double lower_bound_from_parts(double log_h, index_t dim, double factor_log_det, bool precision,
                              double s_sq_norm);

double lower_bound_estimate(std::span<const double> mu, const CholeskyFactor& factor,
                            bool precision, const TargetModel& model, std::span<const double> s);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t draws = 0;
};

// Monte-Carlo average of the single-draw lower bound over fresh draws.
McEstimate mc_lower_bound(std::span<const double> mu, const CholeskyFactor& factor, bool precision,
                          const TargetModel& model, std::int64_t draws, std::uint64_t seed);

}  // namespace gva
