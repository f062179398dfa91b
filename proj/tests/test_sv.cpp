#include <doctest.h>

#include <cmath>

#include "gva/gradcheck.hpp"
#include "gva/rng.hpp"
#include "gva/sv.hpp"
#include "gva/synth.hpp"
#include "support/oracles.hpp"

using namespace gva;

TEST_CASE("log h at the zero point, n=2, y=0") {
  SvSpec spec;
  spec.y = {0.0, 0.0};
  SvModel model(spec);
  const DenseVector theta(5, 0.0);
  // everything vanishes except (1/2) log(1 - phi^2) with phi = 1/2
  CHECK(model.log_h(theta) == doctest::Approx(0.5 * std::log(0.75)).epsilon(1e-15));
}

TEST_CASE("log h equals the naive density-product oracle up to a constant") {
  const SvSpec spec = make_sv_series(12, 51);
  SvModel model(spec);
  Rng rng(52);
  DenseVector theta0 = rng.normal_vec(model.dim());
  for (double& v : theta0) v *= 0.5;
  const double offset0 = model.log_h(theta0) - oracles::sv_naive_log_joint(spec, theta0);
  for (int rep = 0; rep < 10; ++rep) {
    DenseVector theta = rng.normal_vec(model.dim());
    for (double& v : theta) v *= 0.5;
    const double offset = model.log_h(theta) - oracles::sv_naive_log_joint(spec, theta);
    CHECK(offset == doctest::Approx(offset0).epsilon(1e-12));
  }
}

TEST_CASE("alpha prior contribution is exactly quadratic") {
  SvSpec spec = make_sv_series(8, 53);
  SvModel model(spec);
  SvSpec no_prior = spec;
  no_prior.sigma2_alpha = 1e12;  // effectively flat
  SvModel flat(no_prior);
  Rng rng(54);
  for (int rep = 0; rep < 5; ++rep) {
    DenseVector theta = rng.normal_vec(model.dim());
    const double alpha = theta[static_cast<std::size_t>(spec.n())];
    const double diff = model.log_h(theta) - flat.log_h(theta);
    const double expected = -0.5 * alpha * alpha / spec.sigma2_alpha +
                            0.5 * alpha * alpha / no_prior.sigma2_alpha;
    // the difference of two O(100) log densities carries their round-off
    CHECK(diff == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("gradients match finite differences on every block") {
  SvModel model(make_sv_series(10, 55));
  const index_t n = 10;
  const auto report = gradcheck(
      model,
      {{"b", 0, n}, {"alpha", n, n + 1}, {"lambda", n + 1, n + 2}, {"psi", n + 2, n + 3}}, 20,
      1e-5, 406);
  for (const auto& block : report.blocks) {
    INFO(block.name);
    CHECK(block.max_rel_error < 1e-5);
  }
}

TEST_CASE("d/dlambda at theta=0 with zero returns is -n/2") {
  SvSpec spec;
  spec.y.assign(14, 0.0);
  SvModel model(spec);
  const DenseVector theta(17, 0.0);
  DenseVector grad(17);
  model.grad_log_h(theta, grad);
  CHECK(grad[15] == doctest::Approx(-7.0).epsilon(1e-15));  // lambda component
}

TEST_CASE("phi -> 0 limit decouples the states") {
  const SvSpec spec = make_sv_series(9, 56);
  SvModel model(spec);
  Rng rng(57);
  DenseVector theta = rng.normal_vec(model.dim());
  theta[static_cast<std::size_t>(spec.n()) + 2] = -40.0;  // psi -> -inf, phi ~ 4e-18
  DenseVector grad(static_cast<std::size_t>(model.dim()));
  model.grad_log_h(theta, grad);
  const double alpha = theta[static_cast<std::size_t>(spec.n())];
  const double lambda = theta[static_cast<std::size_t>(spec.n()) + 1];
  const double sigma = std::exp(alpha);
  for (index_t t = 1; t + 1 < spec.n(); ++t) {
    const double w = spec.y[t] * spec.y[t] * std::exp(-lambda - sigma * theta[t]);
    const double expected = -theta[t] - 0.5 * sigma + 0.5 * sigma * w;
    CHECK(grad[t] == doctest::Approx(expected).epsilon(1e-12));
  }
  const DenseVector numeric = finite_difference_gradient(model, theta, 1e-5);
  for (index_t t = 0; t < spec.n(); ++t) {
    CHECK(grad[t] == doctest::Approx(numeric[t]).epsilon(1e-5));
  }
}

TEST_CASE("recommended pattern is the k=1 band with 3 globals") {
  const SvSpec spec = make_sv_series(20, 58);
  SvModel model(spec);
  CHECK(model.recommended_pattern() == build_ssm_pattern(20, 1, 3));
}

TEST_CASE("spec validation") {
  SvSpec tiny;
  tiny.y = {1.0};
  CHECK_THROWS_AS(tiny.validate(), std::invalid_argument);
  SvSpec bad = make_sv_series(5, 59);
  bad.sigma2_psi = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
