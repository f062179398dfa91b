#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gva/adadelta.hpp"

using namespace gva;

TEST_CASE("first step for a unit gradient") {
  AdadeltaAccumulator acc(1, 0.95, 1e-6);
  const DenseVector delta = acc.step(DenseVector{1.0});
  // hand arithmetic: Eg2 = 0.05, delta = sqrt(1e-6) / sqrt(0.05 + 1e-6)
  const double expected = std::sqrt(1e-6) / std::sqrt(0.95 * 0.0 + (1.0 - 0.95) * 1.0 + 1e-6);
  CHECK(delta[0] == expected);
  CHECK(delta[0] == doctest::Approx(4.4721e-3).epsilon(1e-4));
  CHECK(acc.eg2[0] == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(acc.edx2[0] == doctest::Approx(0.05 * expected * expected).epsilon(1e-14));
}

TEST_CASE("zero gradient gives zero step and decaying accumulators") {
  AdadeltaAccumulator acc(2, 0.95, 1e-6);
  acc.eg2 = {0.4, 0.8};
  acc.edx2 = {0.2, 0.1};
  const DenseVector delta = acc.step(DenseVector{0.0, 0.0});
  CHECK(delta == DenseVector{0.0, 0.0});
  CHECK(acc.eg2[0] == doctest::Approx(0.95 * 0.4).epsilon(1e-15));
  CHECK(acc.eg2[1] == doctest::Approx(0.95 * 0.8).epsilon(1e-15));
  CHECK(acc.edx2[0] == doctest::Approx(0.95 * 0.2).epsilon(1e-15));
}

TEST_CASE("constant gradient: sign preserved, magnitude bounded, early growth monotone") {
  for (double g : {2.5, -0.3}) {
    AdadeltaAccumulator acc(1, 0.95, 1e-6);
    double prev = 0.0;
    bool monotone_early = true;
    for (int t = 0; t < 1000; ++t) {
      const DenseVector delta = acc.step(DenseVector{g});
      CHECK(std::signbit(delta[0]) == std::signbit(g));
      CHECK(std::abs(delta[0]) <= std::abs(g) * (1.0 + 1e-12));
      if (t > 0 && t < 50 && std::abs(delta[0]) + 1e-15 < prev) monotone_early = false;
      prev = std::abs(delta[0]);
      CHECK(std::isfinite(delta[0]));
    }
    CHECK(monotone_early);
  }
}

TEST_CASE("componentwise independence") {
  AdadeltaAccumulator joint(2, 0.95, 1e-6);
  AdadeltaAccumulator solo(1, 0.95, 1e-6);
  const DenseVector dj = joint.step(DenseVector{3.0, -1.0});
  const DenseVector ds = solo.step(DenseVector{3.0});
  CHECK(dj[0] == ds[0]);
}

TEST_CASE("rho and eps are validated") {
  CHECK_THROWS_AS(AdadeltaAccumulator(1, 1.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(AdadeltaAccumulator(1, 0.95, 0.0), std::invalid_argument);
  AdadeltaAccumulator acc(2, 0.95, 1e-6);
  CHECK_THROWS_AS(acc.step(DenseVector{1.0}), std::invalid_argument);
}
