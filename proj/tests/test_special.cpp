#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "xicor/error.hpp"
#include "xicor/special.hpp"

using namespace xicor;

TEST_CASE("incomplete beta: hand-evaluated values") {
  for (double x : {0.0, 0.25, 1.0}) CHECK(reg_incomplete_beta(x, 1, 1) == doctest::Approx(x).epsilon(1e-14));
  CHECK(std::abs(reg_incomplete_beta(0.75, 1, 0.5) - 0.5) < 1e-12);
  const double pi = std::numbers::pi;
  const double expected = (pi / 3 - std::sqrt(3.0) / 4) / (pi / 2);
  CHECK(std::abs(reg_incomplete_beta(0.75, 1.5, 0.5) - expected) < 1e-12);
  CHECK(reg_incomplete_beta(0.0, 3.5, 0.5) == 0.0);
  CHECK(reg_incomplete_beta(1.0, 3.5, 0.5) == 1.0);
}

TEST_CASE("incomplete beta agrees with Boost on random arguments") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::uniform_real_distribution<double> ua(0.05, 60.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = ux(rng), a = ua(rng), b = ua(rng);
    worst = std::max(worst, std::abs(reg_incomplete_beta(x, a, b) - boost::math::ibeta(a, b, x)));
  }
  CHECK(worst < 1e-10);

  // The arguments used for q_m and cap volumes.
  for (int m = 1; m <= 200; ++m) {
    const double a = (m + 1) / 2.0;
    for (double x : {0.01, 0.3, 0.75, 0.99}) {
      CHECK(std::abs(reg_incomplete_beta(x, a, 0.5) - boost::math::ibeta(a, 0.5, x)) < 1e-10);
    }
  }
}

TEST_CASE("incomplete beta domain errors") {
  CHECK_THROWS_AS(reg_incomplete_beta(-0.1, 1, 1), InvalidInput);
  CHECK_THROWS_AS(reg_incomplete_beta(1.1, 1, 1), InvalidInput);
  CHECK_THROWS_AS(reg_incomplete_beta(0.5, 0, 1), InvalidInput);
  CHECK_THROWS_AS(reg_incomplete_beta(0.5, 1, -2), InvalidInput);
  CHECK_THROWS_AS(reg_incomplete_beta(std::nan(""), 1, 1), InvalidInput);
}

TEST_CASE("normal distribution helpers") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(normal_sf(10.0) > 0.0);
  CHECK(normal_sf(10.0) == doctest::Approx(7.61985302416047e-24).epsilon(1e-10));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(std::abs(normal_quantile(0.5)) < 1e-12);
  for (double p : {1e-8, 0.01, 0.3, 0.77, 0.999}) CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  CHECK_THROWS_AS(normal_quantile(0.0), InvalidInput);
  CHECK_THROWS_AS(normal_quantile(1.0), InvalidInput);
}
