#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xicor/matrix.hpp"
#include "xicor/nn_graph.hpp"

namespace xicor {

/// Latent models for (Y, Z). `gaussian` is the equi-correlated normal; the
/// rest are additive Y = rho * sum_j f(Z_j) + C * eps with Z_j ~ U[-1, 1].
enum class Model { gaussian, linear, quadratic, cosine, wshape };

/// How Z in R^m is placed in ambient space.
enum class Transform { identity, linear_embed, manifold_embed };

std::string_view to_string(Model model) noexcept;
std::string_view to_string(Transform transform) noexcept;
Model parse_model(std::string_view text);
Transform parse_transform(std::string_view text);

/// Noise scale C of an additive model (0 for gaussian).
double noise_scale(Model model) noexcept;

/// Link function f of an additive model.
double link(Model model, double x) noexcept;

struct ScenarioSpec {
  Model model = Model::gaussian;
  Transform transform = Transform::identity;
  int m = 1;
  double rho = 0.0;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::uint64_t r_seed = 0;
};

/// Throws InvalidInput on m < 1, n < 1, rho < 0 or, for the gaussian model,
/// m * rho^2 >= 1 (covariance not positive definite).
void validate(const ScenarioSpec& spec);

struct Latent {
  Matrix z;
  std::vector<double> y;
};

/// Draws (Z, Y). The gaussian model uses Y = rho * sum_j Z_j + sqrt(1 - m rho^2) eps
/// with Z ~ N(0, I_m), which has covariance [[1, rho 1'], [rho 1, I]] exactly.
Latent gen_latent(const ScenarioSpec& spec);

/// The 5m x m standard normal matrix R determined by r_seed.
Matrix linear_embedding_matrix(int m, std::uint64_t r_seed);

/// Rows x_i = R z_i.
Matrix embed_linear(const Matrix& z, const Matrix& r);
Matrix embed_linear(const Matrix& z, std::uint64_t r_seed);

/// Rows (z, z^2, sin(8 pi z), cos(4 pi z), exp(z)), each block elementwise.
Matrix embed_manifold(const Matrix& z);

/// 64-bit FNV-1a digest of the matrix shape and the bytes of its entries, hex.
std::string matrix_hash(const Matrix& m);

struct GeneratedData {
  Matrix x;
  std::vector<double> y;
  Matrix latent_z;
  /// Digest of R for linear_embed, empty otherwise.
  std::optional<std::string> r_hash;
};

GeneratedData generate(const ScenarioSpec& spec);

/// n i.i.d. uniform points on [0,1]^m. The metric (cube or torus) is chosen
/// downstream when the graph is built.
PointCloud sample_uniform_manifold(int m, std::size_t n, std::uint64_t seed);

}  // namespace xicor
