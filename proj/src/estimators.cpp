#include "gva/estimators.hpp"

#include <cmath>
#include <numbers>

#include "gva/kernels.hpp"
#include "gva/rng.hpp"

namespace gva {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void resize_out(GradientEstimate& out, index_t dim, nnz_t nnz) {
  out.theta.resize(static_cast<std::size_t>(dim));
  out.g_mu.resize(static_cast<std::size_t>(dim));
  out.g_factor.resize(static_cast<std::size_t>(nnz));
}

}  // namespace

void estimate_gradients(std::span<const double> mu, const CholeskyFactor& T,
                        const TargetModel& model, std::span<const double> s, Estimator family,
                        GradientEstimate& out, EstimatorWorkspace& ws) {
  const SparsityPattern& p = T.pattern();
  const index_t d = p.dim();
  resize_out(out, d, p.nnz());
  ws.x.resize(static_cast<std::size_t>(d));
  ws.y.resize(static_cast<std::size_t>(d));

  solve_transposed(T, s, ws.x);                     // x = T^{-T} s
  kernels::add(mu, ws.x, out.theta);                // theta = mu + x
  out.log_h = model.log_h_and_grad(out.theta, out.g_mu);

  if (family == Estimator::family2) {
    multiply(T, s, ws.y);                           // reuse y for T s
    kernels::axpy(1.0, ws.y, out.g_mu);             // g_mu += T s
  }
  solve_direct(T, out.g_mu, ws.y);                  // y = T^{-1} g_mu
  kernels::neg_outer_at(p.row_idx(), p.col_idx(), ws.x, ws.y, out.g_factor);
  detail::count_touches(p.nnz());
  if (family == Estimator::family1) {
    for (index_t j = 0; j < d; ++j) {
      out.g_factor[static_cast<std::size_t>(p.diag_pos(j))] -= 1.0 / T.diag(j);
    }
  }
  out.finite = std::isfinite(out.log_h) && all_finite(out.g_mu) && all_finite(out.g_factor);
}

void estimate_gradients_covariance(std::span<const double> mu, const CholeskyFactor& L,
                                   const TargetModel& model, std::span<const double> s,
                                   Estimator family, GradientEstimate& out,
                                   EstimatorWorkspace& ws) {
  const SparsityPattern& p = L.pattern();
  const index_t d = p.dim();
  resize_out(out, d, p.nnz());
  ws.x.resize(static_cast<std::size_t>(d));
  ws.y.resize(static_cast<std::size_t>(d));

  multiply(L, s, ws.x);                             // x = L s
  kernels::add(mu, ws.x, out.theta);
  out.log_h = model.log_h_and_grad(out.theta, out.g_mu);

  if (family == Estimator::family2) {
    solve_transposed(L, s, ws.y);                   // y = L^{-T} s
    kernels::axpy(1.0, ws.y, out.g_mu);
  }
  // g_L = +(g_mu s') at pattern positions; neg_outer_at computes -g_mu[r]*s[c]
  kernels::neg_outer_at(p.row_idx(), p.col_idx(), out.g_mu, s, out.g_factor);
  for (double& v : out.g_factor) v = -v;
  detail::count_touches(p.nnz());
  if (family == Estimator::family1) {
    for (index_t j = 0; j < d; ++j) {
      out.g_factor[static_cast<std::size_t>(p.diag_pos(j))] += 1.0 / L.diag(j);
    }
  }
  out.finite = std::isfinite(out.log_h) && all_finite(out.g_mu) && all_finite(out.g_factor);
}

GradientEstimate estimate_gradients(std::span<const double> mu, const CholeskyFactor& T,
                                    const TargetModel& model, std::span<const double> s,
                                    Estimator family) {
  GradientEstimate out;
  EstimatorWorkspace ws;
  estimate_gradients(mu, T, model, s, family, out, ws);
  return out;
}

GradientEstimate estimate_gradients_covariance(std::span<const double> mu,
                                               const CholeskyFactor& L, const TargetModel& model,
                                               std::span<const double> s, Estimator family) {
  GradientEstimate out;
  EstimatorWorkspace ws;
  estimate_gradients_covariance(mu, L, model, s, family, out, ws);
  return out;
}

void chain_to_tprime(const CholeskyFactor& T, std::span<double> g) {
  const SparsityPattern& p = T.pattern();
  for (index_t j = 0; j < p.dim(); ++j) {
    g[static_cast<std::size_t>(p.diag_pos(j))] *= T.diag(j);
  }
}

double lower_bound_from_parts(double log_h, index_t dim, double factor_log_det, bool precision,
                              double s_sq_norm) {
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return log_h + dim * half_log_2pi + (precision ? -factor_log_det : factor_log_det) +
         0.5 * s_sq_norm;
}

double lower_bound_estimate(std::span<const double> mu, const CholeskyFactor& factor,
                            bool precision, const TargetModel& model, std::span<const double> s) {
  DenseVector x = precision ? solve_transposed(factor, s) : multiply(factor, s);
  DenseVector theta(x.size());
  kernels::add(mu, x, theta);
  return lower_bound_from_parts(model.log_h(theta), factor.dim(), log_det(factor), precision,
                                kernels::sum_sq(s));
}

McEstimate mc_lower_bound(std::span<const double> mu, const CholeskyFactor& factor, bool precision,
                          const TargetModel& model, std::int64_t draws, std::uint64_t seed) {
  Rng rng(seed);
  const index_t d = factor.dim();
  DenseVector s(static_cast<std::size_t>(d));
  const double ld = log_det(factor);
  DenseVector x(static_cast<std::size_t>(d)), theta(static_cast<std::size_t>(d));
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    rng.normal_vec(s);
    if (precision) {
      solve_transposed(factor, s, x);
    } else {
      multiply(factor, s, x);
    }
    kernels::add(mu, x, theta);
    const double lhat =
        lower_bound_from_parts(model.log_h(theta), d, ld, precision, kernels::sum_sq(s));
    const double delta = lhat - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (lhat - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.draws = draws;
  est.std_error = draws > 1 ? std::sqrt(m2 / static_cast<double>(draws - 1) /
                                        static_cast<double>(draws))
                            : 0.0;
  return est;
}

}  // namespace gva
