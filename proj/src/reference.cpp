#include "xicor/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "om_kernel.hpp"
#include "xicor/error.hpp"

namespace xicor::reference {

NnGraph nn_graph_brute(const PointCloud& cloud, Geometry geometry) {
  const std::size_t n = cloud.size();
  std::vector<std::uint32_t> nn(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = squared_distance(cloud.point(i), cloud.point(j), geometry);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    nn[i] = static_cast<std::uint32_t>(best_j);
  }
  return NnGraph::from_neighbors(std::move(nn));
}

std::uint64_t count_triples_enumerate(const NnGraph& graph) {
  std::uint64_t count = 0;
  const std::size_t n = graph.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && graph.nn_index[i] == graph.nn_index[j]) ++count;
    }
  }
  return count;
}

std::uint64_t count_pairs_enumerate(const NnGraph& graph) {
  std::uint64_t count = 0;
  const std::size_t n = graph.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && graph.nn_index[i] == j && graph.nn_index[j] == i) ++count;
    }
  }
  return count;
}

MonteCarloEstimate o_m_monte_carlo(int m, std::uint64_t samples, std::uint64_t seed) {
  if (m < 1) throw InvalidInput("dimension m must be >= 1");
  if (samples < 100'000) throw InvalidInput("o_m Monte Carlo needs at least 1e5 samples");
  const double v = ball_volume(m);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t b = 0; b * kOmBlockSize < samples; ++b) {
    const std::uint64_t count = std::min(kOmBlockSize, samples - b * kOmBlockSize);
    const auto s = detail::om_block(m, v, count, seed, b);
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace xicor::reference
