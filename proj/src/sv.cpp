#include "gva/sv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gva {

void SvSpec::validate() const {
  if (y.size() < 2) throw std::invalid_argument("SvSpec: need at least 2 observations");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("SvSpec: non-finite return");
  if (!(sigma2_alpha > 0.0) || !(sigma2_lambda > 0.0) || !(sigma2_psi > 0.0))
    throw std::invalid_argument("SvSpec: prior variances must be positive");
}

SvModel::SvModel(SvSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

SparsityPattern SvModel::recommended_pattern() const {
  return build_ssm_pattern(spec_.n(), 1, 3);
}

double SvModel::eval(std::span<const double> theta, std::span<double>* grad) const {
  const SvSpec& m = spec_;
  const index_t n = m.n();
  const double* b = theta.data();
  const double alpha = theta[static_cast<std::size_t>(n)];
  const double lambda = theta[static_cast<std::size_t>(n) + 1];
  const double psi = theta[static_cast<std::size_t>(n) + 2];

  const double sigma = std::exp(alpha);
  const double phi = 1.0 / (1.0 + std::exp(-psi));
  const double one_minus_phi = 1.0 / (1.0 + std::exp(psi));  // 1 - phi, stable for large psi
  const double one_minus_phi2 = one_minus_phi * (1.0 + phi);
  const double dphi_dpsi = phi * one_minus_phi;

  double* gb = nullptr;
  if (grad) {
    std::fill(grad->begin(), grad->end(), 0.0);
    gb = grad->data();
  }

  double logh = -0.5 * n * lambda;
  double sum_b = 0.0, sum_w = 0.0, sum_bw = 0.0;
  for (index_t t = 0; t < n; ++t) {
    const double bt = b[t];
    const double w = m.y[static_cast<std::size_t>(t)] * m.y[static_cast<std::size_t>(t)] *
                     std::exp(-lambda - sigma * bt);
    sum_b += bt;
    sum_w += w;
    sum_bw += bt * w;
    if (grad) gb[t] += 0.5 * sigma * (w - 1.0);
  }
  logh -= 0.5 * sigma * sum_b;
  logh -= 0.5 * sum_w;

  // stationary AR(1) for the latent log-volatility
  double sum_innov_b = 0.0;  // sum over t of (b_{t+1} - phi b_t) b_t
  for (index_t t = 0; t + 1 < n; ++t) {
    const double innov = b[t + 1] - phi * b[t];
    logh -= 0.5 * innov * innov;
    sum_innov_b += innov * b[t];
    if (grad) {
      gb[t + 1] -= innov;
      gb[t] += phi * innov;
    }
  }
  logh += 0.5 * (std::log(one_minus_phi) + std::log1p(phi));  // (1/2) log(1 - phi^2)
  logh -= 0.5 * one_minus_phi2 * b[0] * b[0];
  if (grad) gb[0] -= one_minus_phi2 * b[0];

  logh -= 0.5 * alpha * alpha / m.sigma2_alpha;
  logh -= 0.5 * lambda * lambda / m.sigma2_lambda;
  logh -= 0.5 * psi * psi / m.sigma2_psi;

  if (grad) {
    double* g = grad->data();
    g[static_cast<std::size_t>(n)] =
        0.5 * sigma * sum_bw - 0.5 * sigma * sum_b - alpha / m.sigma2_alpha;
    g[static_cast<std::size_t>(n) + 1] = -0.5 * n + 0.5 * sum_w - lambda / m.sigma2_lambda;
    g[static_cast<std::size_t>(n) + 2] =
        (phi * b[0] * b[0] - phi / one_minus_phi2 + sum_innov_b) * dphi_dpsi -
        psi / m.sigma2_psi;
  }
  return logh;
}

double SvModel::log_h(std::span<const double> theta) const { return eval(theta, nullptr); }

void SvModel::grad_log_h(std::span<const double> theta, std::span<double> grad) const {
  eval(theta, &grad);
}

double SvModel::log_h_and_grad(std::span<const double> theta, std::span<double> grad) const {
  return eval(theta, &grad);
}

}  // namespace gva
