#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "xicor/error.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/nn_graph.hpp"

using namespace xicor;

namespace {

double column_correlation(const Matrix& z, std::size_t col, const std::vector<double>& y) {
  const std::size_t n = y.size();
  double mz = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mz += z(i, col), my += y[i];
  mz /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double szz = 0, syy = 0, szy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    szz += (z(i, col) - mz) * (z(i, col) - mz);
    syy += (y[i] - my) * (y[i] - my);
    szy += (z(i, col) - mz) * (y[i] - my);
  }
  return szy / std::sqrt(szz * syy);
}

// Rank by Gaussian elimination with partial pivoting.
std::size_t numeric_rank(Matrix a, double tol = 1e-9) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t pivot = rank;
    for (std::size_t i = rank; i < a.rows(); ++i)
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    if (std::abs(a(pivot, col)) < tol) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(pivot, j));
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      const double f = a(i, col) / a(rank, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("names round-trip") {
  for (Model m : {Model::gaussian, Model::linear, Model::quadratic, Model::cosine, Model::wshape})
    CHECK(parse_model(to_string(m)) == m);
  for (Transform t : {Transform::identity, Transform::linear_embed, Transform::manifold_embed})
    CHECK(parse_transform(to_string(t)) == t);
  CHECK_THROWS_AS(parse_model("sine"), InvalidInput);
  CHECK_THROWS_AS(parse_transform("rotate"), InvalidInput);
}

TEST_CASE("link functions and noise scales") {
  CHECK(link(Model::wshape, -0.5) == 0.0);
  CHECK(link(Model::wshape, 0.5) == 0.0);
  CHECK(link(Model::wshape, 0.0) == 0.5);
  CHECK(link(Model::wshape, 1.0) == 0.5);
  CHECK(link(Model::wshape, -1.0) == 0.5);
  CHECK(link(Model::linear, 0.3) == 0.3);
  CHECK(link(Model::quadratic, -0.5) == 0.25);
  CHECK(link(Model::cosine, 0.25) == doctest::Approx(1.0));
  CHECK(noise_scale(Model::linear) == 0.2);
  CHECK(noise_scale(Model::quadratic) == 0.1);
  CHECK(noise_scale(Model::cosine) == 0.1);
  CHECK(noise_scale(Model::wshape) == 0.025);
}

TEST_CASE("scenario validation") {
  ScenarioSpec s;
  s.m = 4;
  s.rho = 0.5;  // 4 * 0.25 = 1: singular
  CHECK_THROWS_AS(validate(s), InvalidInput);
  s.rho = 0.49;
  CHECK_NOTHROW(validate(s));
  s.model = Model::linear;
  s.rho = 3.0;
  CHECK_NOTHROW(validate(s));
  s.rho = -0.1;
  CHECK_THROWS_AS(validate(s), InvalidInput);
  s.rho = 0.1;
  s.m = 0;
  CHECK_THROWS_AS(validate(s), InvalidInput);
}

TEST_CASE("gaussian latent covariance") {
  ScenarioSpec s;
  s.n = 100'000;
  s.m = 3;
  s.rho = 0.0;
  s.seed = 1;
  Latent null = gen_latent(s);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(column_correlation(null.z, j, null.y)) < 0.01);

  s.rho = 0.4;
  Latent dep = gen_latent(s);
  CHECK(testing::sample_variance(dep.y) == doctest::Approx(1.0).epsilon(0.02));
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(column_correlation(dep.z, j, dep.y) - 0.4) < 0.01);
  // Z coordinates are mutually uncorrelated.
  std::vector<double> z0(s.n);
  for (std::size_t i = 0; i < s.n; ++i) z0[i] = dep.z(i, 0);
  CHECK(std::abs(column_correlation(dep.z, 1, z0)) < 0.01);
}

TEST_CASE("additive latent variance") {
  ScenarioSpec s;
  s.model = Model::linear;
  s.n = 100'000;
  s.m = 1;
  s.rho = 0.2;
  s.seed = 2;
  const Latent l = gen_latent(s);
  CHECK(testing::sample_variance(l.y) == doctest::Approx(0.04 / 3 + 0.04).epsilon(0.05));
  for (double v : l.z.data()) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("manifold embedding blocks") {
  Matrix zero(1, 2);
  const Matrix x0 = embed_manifold(zero);
  CHECK(std::vector<double>(x0.data().begin(), x0.data().end()) ==
        std::vector<double>{0, 0, 0, 0, 0, 0, 1, 1, 1, 1});

  Matrix q(1, 1, {0.25});
  const Matrix x = embed_manifold(q);
  CHECK(x(0, 0) == 0.25);
  CHECK(x(0, 1) == 0.0625);
  CHECK(std::abs(x(0, 2)) < 1e-14);
  CHECK(x(0, 3) == doctest::Approx(-1.0));
  CHECK(x(0, 4) == doctest::Approx(std::exp(0.25)));

  std::mt19937_64 rng(4);
  const Matrix z = testing::random_matrix(rng, 50, 3);
  const Matrix e = embed_manifold(z);
  CHECK(e.cols() == 15);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(e(i, j) == z(i, j));
}

TEST_CASE("linear embedding") {
  const Matrix r = linear_embedding_matrix(3, 99);
  CHECK(r.rows() == 15);
  CHECK(r.cols() == 3);
  Matrix basis(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const Matrix x = embed_linear(basis, r);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 15; ++k) CHECK(x(i, k) == r(k, i));

  std::mt19937_64 rng(5);
  const Matrix z = testing::random_matrix(rng, 200, 3);
  CHECK(numeric_rank(embed_linear(z, 99)) == 3);
  CHECK(matrix_hash(linear_embedding_matrix(3, 99)) == matrix_hash(r));
  CHECK(matrix_hash(linear_embedding_matrix(3, 100)) != matrix_hash(r));
  CHECK(matrix_hash(r).size() == 16);
}

TEST_CASE("generate: shapes, reproducibility, shared R") {
  ScenarioSpec s;
  s.model = Model::quadratic;
  s.transform = Transform::linear_embed;
  s.m = 2;
  s.rho = 0.3;
  s.seed = 10;
  s.r_seed = 20;
  const GeneratedData a = generate(s);
  CHECK(a.x.rows() == 100);
  CHECK(a.x.cols() == 10);
  CHECK(a.latent_z.cols() == 2);
  REQUIRE(a.r_hash.has_value());
  CHECK(*a.r_hash == matrix_hash(linear_embedding_matrix(2, 20)));

  const GeneratedData again = generate(s);
  CHECK(again.x == a.x);
  CHECK(again.y == a.y);

  s.seed = 11;
  const GeneratedData other = generate(s);
  CHECK(other.r_hash == a.r_hash);
  CHECK_FALSE(other.y == a.y);

  s.transform = Transform::manifold_embed;
  const GeneratedData m = generate(s);
  CHECK(m.x.cols() == 10);
  CHECK_FALSE(m.r_hash.has_value());
  s.transform = Transform::identity;
  CHECK(generate(s).x.cols() == 2);
}

TEST_CASE("embedded clouds have no duplicate points") {
  for (Transform t : {Transform::linear_embed, Transform::manifold_embed}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      ScenarioSpec s;
      s.model = Model::cosine;
      s.transform = t;
      s.m = 1 + static_cast<int>(seed % 3);
      s.rho = 0.2;
      s.seed = seed;
      s.r_seed = 3;
      const GeneratedData d = generate(s);
      CHECK_NOTHROW(build_nn_graph(PointCloud(d.x), {NnMethod::tree, Geometry::cube, true}));
    }
  }
}

TEST_CASE("uniform manifold sampler") {
  const PointCloud c = sample_uniform_manifold(2, 1000, 3);
  double sum[2] = {0, 0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(c.point(i)[j] >= 0.0);
      CHECK(c.point(i)[j] <= 1.0);
      sum[j] += c.point(i)[j];
    }
  }
  CHECK(std::abs(sum[0] / 1000 - 0.5) < 0.05);
  CHECK(std::abs(sum[1] / 1000 - 0.5) < 0.05);
  CHECK(sample_uniform_manifold(2, 1000, 3).matrix() == c.matrix());

  const PointCloud big = sample_uniform_manifold(1, 100'000, 4);
  const std::vector<double> v(big.matrix().data().begin(), big.matrix().data().end());
  CHECK(testing::sample_variance(v) == doctest::Approx(1.0 / 12).epsilon(0.05));
}
