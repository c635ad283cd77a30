#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "xicor/error.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/parallel.hpp"
#include "xicor/random.hpp"
#include "xicor/rank_xi.hpp"

using namespace xicor;

namespace {

using Ranks = std::vector<std::uint32_t>;

double xi(const Matrix& x, const std::vector<double>& y) { return xi_n(PointCloud(x), y).value; }

// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
Matrix random_rotation(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal;
  Matrix q(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) q(i, j) = normal(rng);
    for (std::size_t k = 0; k < i; ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += q(i, j) * q(k, j);
      for (std::size_t j = 0; j < d; ++j) q(i, j) -= dot * q(k, j);
    }
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) norm += q(i, j) * q(i, j);
    for (std::size_t j = 0; j < d; ++j) q(i, j) /= std::sqrt(norm);
  }
  return q;
}

}  // namespace

TEST_CASE("ranks: counting definition") {
  CHECK(compute_ranks(std::vector<double>{10.0, -3.0, 5.5}).ranks == Ranks{3, 1, 2});
  CHECK(compute_ranks(std::vector<double>{7, 7}).ranks == Ranks{2, 2});
  CHECK(compute_ranks(std::vector<double>{1, 2, 3, 4, 5}).ranks == Ranks{1, 2, 3, 4, 5});
  CHECK(compute_ranks(std::vector<double>{2, 1, 2, 0}).ranks == Ranks{4, 2, 4, 1});
  CHECK(compute_ranks(std::vector<double>{7, 7}).constant());
  CHECK_FALSE(compute_ranks(std::vector<double>{7, 8}).constant());
}

TEST_CASE("ranks: errors") {
  CHECK_THROWS_AS(compute_ranks(std::vector<double>{1.0}), InvalidInput);
  CHECK_THROWS_AS(compute_ranks(std::vector<double>{1.0, std::nan("")}), InvalidInput);
  CHECK_THROWS_AS(compute_ranks(std::vector<double>{7, 7}, TiePolicy::strict), TieError);
  CHECK_NOTHROW(compute_ranks(std::vector<double>{7, 8}, TiePolicy::strict));
}

TEST_CASE("ranks match a sort-based count on random data with ties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> y(2 + static_cast<std::size_t>(trial));
    for (double& v : y) v = small(rng);
    const Ranks r = compute_ranks(y).ranks;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto count = std::count_if(y.begin(), y.end(), [&](double v) { return v <= y[i]; });
      CHECK(r[i] == static_cast<std::uint32_t>(count));
    }
  }
}

TEST_CASE("xi_n: hand examples") {
  const PointCloud x = PointCloud::from_values(std::vector<double>{1, 2, 3});
  const XiStatistic s = xi_n(x, std::vector<double>{1, 2, 3});
  CHECK(s.value == -0.5);
  CHECK(s.n == 3);
  // Constant response: ranks all n, sum of minima n^2.
  CHECK(xi_n(x, std::vector<double>{4, 4, 4}).value == 13.0 / 4.0);
  CHECK(xi_from_rank_sum(4, 3) == -0.5);
}

TEST_CASE("xi_n: errors") {
  const PointCloud x = PointCloud::from_values(std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(xi_n(x, std::vector<double>{1, 2}), InvalidInput);
  const PointCloud two = PointCloud::from_values(std::vector<double>{1, 2});
  CHECK_THROWS_AS(xi_n(two, std::vector<double>{1, 2}), InvalidInput);
  XiOptions strict;
  strict.ties = TiePolicy::strict;
  CHECK_THROWS_AS(xi_n(x, std::vector<double>{1, 1, 3}, strict), TieError);
}

TEST_CASE("xi_n: functional dependence at n = 5000") {
  const PointCloud x = sample_uniform_manifold(3, 5000, 8);
  std::vector<double> y(5000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x.point(i)[0];
  const double v = xi_n(x, y).value;
  CHECK(v > 0.9);
  CHECK(v < 1.001);
}

TEST_CASE("xi_n: invariance properties") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 50 + 10 * static_cast<std::size_t>(trial);
    const std::size_t d = 1 + static_cast<std::size_t>(trial) % 4;
    const Matrix x = testing::random_matrix(rng, n, d);
    const std::vector<double> y = testing::random_vector(rng, n);
    const double base = xi(x, y);

    // Strictly increasing transforms of y.
    std::vector<double> ey(y), cy(y);
    for (double& v : ey) v = std::exp(v);
    for (double& v : cy) v = v * v * v;
    CHECK(xi(x, ey) == base);
    CHECK(xi(x, cy) == base);

    // Rotation plus translation of x.
    const Matrix q = random_rotation(rng, d);
    Matrix moved(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        double s = 3.0 - static_cast<double>(j);
        for (std::size_t k = 0; k < d; ++k) s += q(j, k) * x(i, k);
        moved(i, j) = s;
      }
    }
    CHECK(xi(moved, y) == base);

    // Joint row permutation.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix px(n, d);
    std::vector<double> py(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) px(i, j) = x(perm[i], j);
      py[i] = y[perm[i]];
    }
    CHECK(xi(px, py) == base);

    // Upper range: xi_n <= 1 + O(1/n).
    CHECK(base < 1.0 + 3.0 / static_cast<double>(n));
  }
}

TEST_CASE("xi_n: null mean at n = 100") {
  // The exact null mean is -1/(n-1), i.e. about 4 standard errors below zero
  // for 2000 replicates, so the check is against that value.
  const std::size_t n = 100;
  std::vector<double> values;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    Rng rng = make_rng(404, {r});
    const Matrix x = testing::random_matrix(rng, n, 2);
    const std::vector<double> y = testing::random_vector(rng, n);
    values.push_back(xi(x, y));
  }
  const double mean = testing::sample_mean(values);
  const double se = std::sqrt(testing::sample_variance(values) / static_cast<double>(values.size()));
  CHECK(std::abs(mean + 1.0 / (n - 1)) < 3 * se);
  CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("a_moment_oracle") {
  const MomentEstimates m = a_moment_oracle(1'000'000, 1);
  CHECK(std::abs(m.mean) < 0.01);
  CHECK(std::abs(m.gamma1 - 2.0) < 0.02);
  CHECK(std::abs(m.gamma2 - 0.8) < 0.02);
  CHECK_THROWS_AS(a_moment_oracle(9999, 1), InvalidInput);

  set_num_threads(1);
  const MomentEstimates a = a_moment_oracle(300'000, 2);
  set_num_threads(3);
  const MomentEstimates b = a_moment_oracle(300'000, 2);
  set_num_threads(0);
  CHECK(a.mean == b.mean);
  CHECK(a.gamma1 == b.gamma1);
  CHECK(a.gamma2 == b.gamma2);
}
