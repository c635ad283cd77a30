#include "xicor/nn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xicor/error.hpp"
#include "xicor/kd_tree.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/random.hpp"

namespace xicor {

namespace {

constexpr std::size_t kTreeMaxDim = 20;

std::vector<Neighbor> brute_neighbors(const PointCloud& cloud, Geometry geometry) {
  const std::size_t n = cloud.size();
  std::vector<Neighbor> out(n);
  const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    Neighbor best{UINT32_MAX, std::numeric_limits<double>::infinity()};
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = squared_distance(p, cloud.point(j), geometry);
      if (d < best.squared_distance) best = {static_cast<std::uint32_t>(j), d};
    }
    out[i] = best;
  }
  return out;
}

std::vector<Neighbor> tree_neighbors(const PointCloud& cloud, Geometry geometry) {
  const KdTree tree(cloud.matrix(), geometry);
  const std::size_t n = cloud.size();
  std::vector<Neighbor> out(n);
  const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t si = 0; si < sn; ++si) {
    out[static_cast<std::size_t>(si)] = tree.nearest_excluding(static_cast<std::size_t>(si));
  }
  return out;
}

}  // namespace

PointCloud::PointCloud(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 2) {
    throw InvalidInput("point cloud needs at least 2 points, got " +
                       std::to_string(points_.rows()));
  }
  if (points_.cols() < 1) throw InvalidInput("point cloud needs at least one coordinate");
  for (std::size_t i = 0; i < points_.rows(); ++i) {
    for (double v : points_.row(i)) {
      if (!std::isfinite(v)) {
        throw InvalidInput("non-finite coordinate in row " + std::to_string(i));
      }
    }
  }
}

PointCloud PointCloud::from_values(std::span<const double> values) {
  return PointCloud(Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end())));
}

double squared_distance(std::span<const double> a, std::span<const double> b,
                        Geometry geometry) noexcept {
  double sum = 0.0;
  if (geometry == Geometry::torus) {
    for (std::size_t c = 0; c < a.size(); ++c) {
      double d = std::fabs(a[c] - b[c]);
      d = std::min(d, 1.0 - d);
      sum += d * d;
    }
  } else {
    for (std::size_t c = 0; c < a.size(); ++c) {
      const double d = a[c] - b[c];
      sum += d * d;
    }
  }
  return sum;
}

std::uint32_t NnGraph::max_in_degree() const noexcept {
  return in_degree.empty() ? 0 : *std::max_element(in_degree.begin(), in_degree.end());
}

NnGraph NnGraph::from_neighbors(std::vector<std::uint32_t> nn_index) {
  NnGraph g;
  const std::size_t n = nn_index.size();
  g.in_degree.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t j = nn_index[i];
    if (j >= n || j == i) {
      throw InvalidInput("invalid neighbor " + std::to_string(j) + " for vertex " +
                         std::to_string(i));
    }
    ++g.in_degree[j];
  }
  g.nn_index = std::move(nn_index);
  return g;
}

NnGraph build_nn_graph(const PointCloud& cloud, const NnOptions& options) {
  const bool use_tree = options.method == NnMethod::tree && cloud.dim() <= kTreeMaxDim;
  const std::vector<Neighbor> found = use_tree ? tree_neighbors(cloud, options.geometry)
                                               : brute_neighbors(cloud, options.geometry);
  std::vector<std::uint32_t> nn(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (options.strict && found[i].squared_distance == 0.0) {
      throw DuplicatePoint(std::min<std::size_t>(i, found[i].index),
                           std::max<std::size_t>(i, found[i].index));
    }
    nn[i] = found[i].index;
  }
  return NnGraph::from_neighbors(std::move(nn));
}

MotifCounts count_motifs(const NnGraph& graph) {
  MotifCounts c;
  c.n = graph.size();
  for (std::size_t i = 0; i < c.n; ++i) {
    if (graph.nn_index[graph.nn_index[i]] == i) ++c.pair_count;
  }
  for (std::uint32_t d : graph.in_degree) {
    c.triple_count += static_cast<std::uint64_t>(d) * (d > 0 ? d - 1 : 0);
  }
  return c;
}

EmpiricalConstants estimate_constants_empirical(int m, std::size_t n, int reps,
                                                Geometry geometry, std::uint64_t seed) {
  if (m < 1) throw InvalidInput("dimension m must be >= 1");
  if (n < 100) throw InvalidInput("empirical constants need n >= 100");
  if (reps < 1) throw InvalidInput("reps must be >= 1");

  std::vector<double> pairs(static_cast<std::size_t>(reps));
  std::vector<double> triples(static_cast<std::size_t>(reps));
  std::vector<std::uint32_t> max_deg(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < reps; ++r) {
    const PointCloud cloud =
        sample_uniform_manifold(m, n, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    const NnGraph g = build_nn_graph(cloud, {NnMethod::tree, geometry, false});
    const MotifCounts c = count_motifs(g);
    const auto ri = static_cast<std::size_t>(r);
    pairs[ri] = static_cast<double>(c.pair_count) / static_cast<double>(n);
    triples[ri] = static_cast<double>(c.triple_count) / static_cast<double>(n);
    max_deg[ri] = g.max_in_degree();
  }

  auto mean_stderr = [reps](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= reps;
    if (reps < 2) return std::pair{mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / (reps - 1) / reps)};
  };

  EmpiricalConstants out;
  std::tie(out.q_hat, out.q_stderr) = mean_stderr(pairs);
  std::tie(out.o_hat, out.o_stderr) = mean_stderr(triples);
  out.max_in_degree = *std::max_element(max_deg.begin(), max_deg.end());
  return out;
}

}  // namespace xicor
