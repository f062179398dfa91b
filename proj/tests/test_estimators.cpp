#include <doctest.h>

#include <cmath>

#include "gva/estimators.hpp"
#include "gva/rng.hpp"
#include "gva/synth.hpp"
#include "support/oracles.hpp"

using namespace gva;

namespace {

// Closed-form lower bound for a Gaussian target under a Gaussian
// approximation, as a function of (mu, T) dense matrices.
double gaussian_elbo(const Eigen::VectorXd& mu_star, const Eigen::MatrixXd& t_star,
                     const Eigen::VectorXd& mu, const Eigen::MatrixXd& t) {
  const Eigen::Index d = mu.size();
  const Eigen::MatrixXd omega_star = t_star * t_star.transpose();
  const Eigen::MatrixXd sigma = (t * t.transpose()).inverse();
  const Eigen::VectorXd diff = mu - mu_star;
  double value = 0.5 * std::log(omega_star.determinant()) - 0.5 * std::log((t * t.transpose()).determinant());
  value += 0.5 * static_cast<double>(d);
  value -= 0.5 * diff.dot(omega_star * diff);
  value -= 0.5 * (omega_star * sigma).trace();
  return value;
}

}  // namespace

TEST_CASE("family 2 cancels at the optimum of the identity Gaussian target") {
  const auto spec = make_gaussian_target(GaussianTargetKind::identity, 16, 71);
  GaussianTargetModel model(spec);
  Rng rng(72);
  for (int rep = 0; rep < 25; ++rep) {
    const DenseVector s = rng.normal_vec(16);
    const auto est = estimate_gradients(spec.mean, spec.factor, model, s, Estimator::family2);
    for (double g : est.g_mu) CHECK(g == 0.0);
    for (double g : est.g_factor) CHECK(g == 0.0);
  }
}

TEST_CASE("family 2 is zero to round-off at a general Gaussian optimum") {
  const auto spec = make_gaussian_target(GaussianTargetKind::band, 24, 73);
  GaussianTargetModel model(spec);
  Rng rng(74);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseVector s = rng.normal_vec(24);
    const auto est = estimate_gradients(spec.mean, spec.factor, model, s, Estimator::family2);
    for (double g : est.g_mu) CHECK(std::abs(g) < 1e-12);
    for (double g : est.g_factor) CHECK(std::abs(g) < 1e-12);
  }
}

TEST_CASE("family 1 at the optimum equals -T* s") {
  const auto spec = make_gaussian_target(GaussianTargetKind::band, 20, 75);
  GaussianTargetModel model(spec);
  Rng rng(76);
  const DenseVector s = rng.normal_vec(20);
  const auto est = estimate_gradients(spec.mean, spec.factor, model, s, Estimator::family1);
  const DenseVector ts = multiply(spec.factor, s);
  bool nonzero = false;
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(est.g_mu[i] == doctest::Approx(-ts[i]).epsilon(1e-11));
    nonzero = nonzero || est.g_mu[i] != 0.0;
  }
  CHECK(nonzero);
}

TEST_CASE("both families are unbiased for the mu gradient") {
  const auto spec = make_gaussian_target(GaussianTargetKind::band, 12, 77);
  GaussianTargetModel model(spec);
  // state away from the optimum: mu = 0, T = identity on the same pattern
  const CholeskyFactor T = CholeskyFactor::identity(spec.factor.pattern_ptr());
  const DenseVector mu(12, 0.0);

  // closed form: grad_mu L = Omega* (mu* - mu)
  const Eigen::MatrixXd t_star = oracles::to_dense(spec.factor);
  const Eigen::VectorXd expected =
      t_star * t_star.transpose() * oracles::to_eigen(spec.mean);

  const int draws = 30000;
  for (Estimator family : {Estimator::family1, Estimator::family2}) {
    Rng rng(78);
    std::vector<DenseVector> samples(12);
    DenseVector s(12);
    GradientEstimate est;
    EstimatorWorkspace ws;
    for (int i = 0; i < draws; ++i) {
      rng.normal_vec(s);
      estimate_gradients(mu, T, model, s, family, est, ws);
      for (int c = 0; c < 12; ++c) samples[c].push_back(est.g_mu[c]);
    }
    for (int c = 0; c < 12; ++c) {
      const double mean = oracles::mean_of(samples[c]);
      const double se = std::sqrt(oracles::variance_of(samples[c]) / draws);
      CHECK(std::abs(mean - expected(c)) < 3.0 * std::max(se, 1e-12));
    }
  }
}

TEST_CASE("covariance-route estimators: cancellation and unbiasedness") {
  // target with identity precision: Sigma = I, so L = I is the optimum
  const auto spec = make_gaussian_target(GaussianTargetKind::identity, 10, 79);
  GaussianTargetModel model(spec);
  const CholeskyFactor L = CholeskyFactor::identity(share(dense_lower_pattern(10)));
  Rng rng(80);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseVector s = rng.normal_vec(10);
    const auto est =
        estimate_gradients_covariance(spec.mean, L, model, s, Estimator::family2);
    for (double g : est.g_mu) CHECK(g == 0.0);
    for (double g : est.g_factor) CHECK(g == 0.0);
  }

  // unbiasedness of g_mu away from the optimum, both families
  const DenseVector mu(10, 0.25);
  const Eigen::VectorXd expected =
      (oracles::to_eigen(spec.mean) - oracles::to_eigen(mu));  // Omega* = I
  const int draws = 20000;
  for (Estimator family : {Estimator::family1, Estimator::family2}) {
    Rng rng2(81);
    DenseVector s(10);
    GradientEstimate est;
    EstimatorWorkspace ws;
    std::vector<DenseVector> samples(10);
    for (int i = 0; i < draws; ++i) {
      rng2.normal_vec(s);
      estimate_gradients_covariance(mu, L, model, s, family, est, ws);
      for (int c = 0; c < 10; ++c) samples[c].push_back(est.g_mu[c]);
    }
    for (int c = 0; c < 10; ++c) {
      const double mean = oracles::mean_of(samples[c]);
      const double se = std::sqrt(oracles::variance_of(samples[c]) / draws);
      CHECK(std::abs(mean - expected(c)) < 3.0 * std::max(se, 1e-12));
    }
  }
}

TEST_CASE("chain_to_tprime") {
  auto pattern = share(build_ssm_pattern(3, 1, 1));
  SUBCASE("identity factor leaves gradients unchanged") {
    const CholeskyFactor T = CholeskyFactor::identity(pattern);
    DenseVector g(static_cast<std::size_t>(pattern->nnz()), 2.0);
    const DenseVector before = g;
    chain_to_tprime(T, g);
    CHECK(g == before);
  }
  SUBCASE("diagonal entries are scaled by T_jj") {
    CholeskyFactor T = CholeskyFactor::identity(pattern);
    T.values()[static_cast<std::size_t>(pattern->diag_pos(1))] = 3.0;
    DenseVector g(static_cast<std::size_t>(pattern->nnz()), 2.0);
    chain_to_tprime(T, g);
    CHECK(g[static_cast<std::size_t>(pattern->diag_pos(1))] == 6.0);
    CHECK(g[static_cast<std::size_t>(pattern->diag_pos(0))] == 2.0);
  }
}

// Finite differences of the closed-form ELBO through the exp
// reparameterization confirm the chain rule used for T'.
TEST_CASE("tprime chain rule against numeric ELBO derivatives") {
  const auto spec = make_gaussian_target(GaussianTargetKind::band, 9, 82);
  const Eigen::MatrixXd t_star = oracles::to_dense(spec.factor);
  const Eigen::VectorXd mu_star = oracles::to_eigen(spec.mean);

  Rng rng(83);
  CholeskyFactor T = CholeskyFactor::identity(spec.factor.pattern_ptr());
  for (double& v : T.values()) v = 0.0;
  const SparsityPattern& p = T.pattern();
  for (index_t j = 0; j < p.dim(); ++j) {
    for (nnz_t e = p.col_ptr()[j]; e < p.col_ptr()[j + 1]; ++e) {
      T.values()[static_cast<std::size_t>(e)] =
          e == p.diag_pos(j) ? 0.9 + 0.2 * rng.uniform() : 0.2 * rng.normal();
    }
  }
  const DenseVector mu = rng.normal_vec(9);

  auto elbo_of_values = [&](const std::vector<double>& values) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(9, 9);
    for (std::size_t e = 0; e < values.size(); ++e) t(p.row_idx()[e], p.col_idx()[e]) = values[e];
    return gaussian_elbo(mu_star, t_star, oracles::to_eigen(mu), t);
  };

  // numeric dL/dT at the pattern entries
  const double h = 1e-6;
  std::vector<double> base(T.values().begin(), T.values().end());
  DenseVector grad_t(base.size());
  for (std::size_t e = 0; e < base.size(); ++e) {
    auto up = base, down = base;
    up[e] += h;
    down[e] -= h;
    grad_t[e] = (elbo_of_values(up) - elbo_of_values(down)) / (2.0 * h);
  }

  // numeric dL/dT' (perturb tprime, map back to T)
  DenseVector tprime = base;
  for (index_t j = 0; j < 9; ++j) {
    const auto e = static_cast<std::size_t>(p.diag_pos(j));
    tprime[e] = std::log(base[e]);
  }
  auto values_of_tprime = [&](const DenseVector& tp) {
    auto values = tp;
    for (index_t j = 0; j < 9; ++j) {
      const auto e = static_cast<std::size_t>(p.diag_pos(j));
      values[e] = std::exp(tp[e]);
    }
    return values;
  };
  DenseVector grad_tprime_numeric(base.size());
  for (std::size_t e = 0; e < base.size(); ++e) {
    auto up = tprime, down = tprime;
    up[e] += h;
    down[e] -= h;
    grad_tprime_numeric[e] =
        (elbo_of_values(values_of_tprime(up)) - elbo_of_values(values_of_tprime(down))) /
        (2.0 * h);
  }

  DenseVector chained = grad_t;
  chain_to_tprime(T, chained);
  for (std::size_t e = 0; e < base.size(); ++e) {
    CHECK(chained[e] == doctest::Approx(grad_tprime_numeric[e]).epsilon(1e-4));
  }
}

TEST_CASE("lower bound estimate") {
  SUBCASE("identity target at the optimum: exactly the normalizing constant") {
    const auto spec = make_gaussian_target(GaussianTargetKind::identity, 12, 84);
    GaussianTargetModel model(spec);
    const DenseVector s(12, 0.0);
    const double lhat = lower_bound_estimate(spec.mean, spec.factor, true, model, s);
    CHECK(lhat == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("at the optimum the estimate is the same for every draw") {
    const auto spec = make_gaussian_target(GaussianTargetKind::band, 15, 85);
    GaussianTargetModel model(spec);
    Rng rng(86);
    DenseVector values;
    double lo = 1e300, hi = -1e300;
    for (int rep = 0; rep < 100; ++rep) {
      const DenseVector s = rng.normal_vec(15);
      const double lhat = lower_bound_estimate(spec.mean, spec.factor, true, model, s);
      lo = std::min(lo, lhat);
      hi = std::max(hi, lhat);
    }
    CHECK(hi - lo < 1e-10);
    CHECK(hi == doctest::Approx(0.0).epsilon(1e-10));  // normalized target
  }
  SUBCASE("a mismatched state sits below the optimum") {
    const auto spec = make_gaussian_target(GaussianTargetKind::band, 10, 87);
    GaussianTargetModel model(spec);
    const CholeskyFactor T = CholeskyFactor::identity(spec.factor.pattern_ptr());
    const DenseVector mu(10, 0.0);
    const auto est = mc_lower_bound(mu, T, true, model, 20000, 88);
    CHECK(est.mean + 3.0 * est.std_error < 0.0);  // KL(q || p) > 0
  }
}
