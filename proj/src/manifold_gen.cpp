#include "xicor/manifold_gen.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "xicor/error.hpp"
#include "xicor/random.hpp"

namespace xicor {

namespace {
constexpr std::uint64_t kEmbeddingStream = 0x52;  // 'R'
}

std::string_view to_string(Model model) noexcept {
  switch (model) {
    case Model::gaussian: return "gaussian";
    case Model::linear: return "linear";
    case Model::quadratic: return "quadratic";
    case Model::cosine: return "cosine";
    case Model::wshape: return "wshape";
  }
  return "unknown";
}

std::string_view to_string(Transform transform) noexcept {
  switch (transform) {
    case Transform::identity: return "identity";
    case Transform::linear_embed: return "linear_embed";
    case Transform::manifold_embed: return "manifold_embed";
  }
  return "unknown";
}

Model parse_model(std::string_view text) {
  for (Model m : {Model::gaussian, Model::linear, Model::quadratic, Model::cosine, Model::wshape}) {
    if (text == to_string(m)) return m;
  }
  throw InvalidInput("unknown case '" + std::string(text) + "'");
}

Transform parse_transform(std::string_view text) {
  for (Transform t : {Transform::identity, Transform::linear_embed, Transform::manifold_embed}) {
    if (text == to_string(t)) return t;
  }
  if (text == "linear") return Transform::linear_embed;
  if (text == "manifold") return Transform::manifold_embed;
  throw InvalidInput("unknown transform '" + std::string(text) + "'");
}

double noise_scale(Model model) noexcept {
  switch (model) {
    case Model::linear: return 0.2;
    case Model::quadratic: return 0.1;
    case Model::cosine: return 0.1;
    case Model::wshape: return 0.025;
    case Model::gaussian: return 0.0;
  }
  return 0.0;
}

double link(Model model, double x) noexcept {
  switch (model) {
    case Model::linear: return x;
    case Model::quadratic: return x * x;
    case Model::cosine: return std::cos(8.0 * std::numbers::pi * x);
    case Model::wshape: return x < 0.0 ? std::fabs(x + 0.5) : std::fabs(x - 0.5);
    case Model::gaussian: return x;
  }
  return x;
}

void validate(const ScenarioSpec& spec) {
  if (spec.m < 1) throw InvalidInput("latent dimension m must be >= 1");
  if (spec.n < 1) throw InvalidInput("sample size n must be >= 1");
  if (!(spec.rho >= 0.0) || !std::isfinite(spec.rho)) {
    throw InvalidInput("rho must be finite and non-negative");
  }
  if (spec.model == Model::gaussian && spec.m * spec.rho * spec.rho >= 1.0) {
    throw InvalidInput("infeasible gaussian correlation: m * rho^2 = " +
                       std::to_string(spec.m * spec.rho * spec.rho) + " >= 1");
  }
}

Latent gen_latent(const ScenarioSpec& spec) {
  validate(spec);
  const auto m = static_cast<std::size_t>(spec.m);
  Rng rng = make_rng(spec.seed, {});
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  Latent out{Matrix(spec.n, m), std::vector<double>(spec.n)};
  if (spec.model == Model::gaussian) {
    const double noise = std::sqrt(1.0 - spec.m * spec.rho * spec.rho);
    for (std::size_t i = 0; i < spec.n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        out.z(i, j) = normal(rng);
        s += out.z(i, j);
      }
      out.y[i] = spec.rho * s + noise * normal(rng);
    }
  } else {
    const double c = noise_scale(spec.model);
    for (std::size_t i = 0; i < spec.n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        out.z(i, j) = unif(rng);
        s += link(spec.model, out.z(i, j));
      }
      out.y[i] = spec.rho * s + c * normal(rng);
    }
  }
  return out;
}

Matrix linear_embedding_matrix(int m, std::uint64_t r_seed) {
  if (m < 1) throw InvalidInput("latent dimension m must be >= 1");
  const auto cols = static_cast<std::size_t>(m);
  Matrix r(5 * cols, cols);
  Rng rng = make_rng(r_seed, {kEmbeddingStream});
  std::normal_distribution<double> normal;
  for (double& v : r.data()) v = normal(rng);
  return r;
}

Matrix embed_linear(const Matrix& z, const Matrix& r) {
  if (r.cols() != z.cols()) throw InvalidInput("embedding matrix does not match latent dimension");
  Matrix x(z.rows(), r.rows());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const auto zi = z.row(i);
    for (std::size_t k = 0; k < r.rows(); ++k) {
      const auto rk = r.row(k);
      double s = 0.0;
      for (std::size_t j = 0; j < z.cols(); ++j) s += rk[j] * zi[j];
      x(i, k) = s;
    }
  }
  return x;
}

Matrix embed_linear(const Matrix& z, std::uint64_t r_seed) {
  return embed_linear(z, linear_embedding_matrix(static_cast<int>(z.cols()), r_seed));
}

Matrix embed_manifold(const Matrix& z) {
  const std::size_t m = z.cols();
  Matrix x(z.rows(), 5 * m);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = z(i, j);
      x(i, j) = v;
      x(i, m + j) = v * v;
      x(i, 2 * m + j) = std::sin(8.0 * std::numbers::pi * v);
      x(i, 3 * m + j) = std::cos(4.0 * std::numbers::pi * v);
      x(i, 4 * m + j) = std::exp(v);
    }
  }
  return x;
}

std::string matrix_hash(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(m.rows());
  feed(m.cols());
  for (double v : m.data()) feed(std::bit_cast<std::uint64_t>(v));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GeneratedData generate(const ScenarioSpec& spec) {
  Latent latent = gen_latent(spec);
  GeneratedData out;
  switch (spec.transform) {
    case Transform::identity:
      out.x = latent.z;
      break;
    case Transform::linear_embed: {
      const Matrix r = linear_embedding_matrix(spec.m, spec.r_seed);
      out.x = embed_linear(latent.z, r);
      out.r_hash = matrix_hash(r);
      break;
    }
    case Transform::manifold_embed:
      out.x = embed_manifold(latent.z);
      break;
  }
  out.y = std::move(latent.y);
  out.latent_z = std::move(latent.z);
  return out;
}

PointCloud sample_uniform_manifold(int m, std::size_t n, std::uint64_t seed) {
  if (m < 1) throw InvalidInput("dimension m must be >= 1");
  Matrix pts(n, static_cast<std::size_t>(m));
  Rng rng = make_rng(seed, {});
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double& v : pts.data()) v = unif(rng);
  return PointCloud(std::move(pts));
}

}  // namespace xicor
