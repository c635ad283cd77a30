#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xicor/matrix.hpp"

namespace xicor {

/// n points in R^d. Construction validates n >= 2 and that every coordinate is
/// finite; pairwise distinctness is only checked when a graph is built in
/// strict mode.
class PointCloud {
 public:
  explicit PointCloud(Matrix points);
  /// One-dimensional convenience constructor.
  static PointCloud from_values(std::span<const double> values);

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  std::span<const double> point(std::size_t i) const noexcept { return points_.row(i); }
  const Matrix& matrix() const noexcept { return points_; }

 private:
  Matrix points_;
};

enum class NnMethod { brute, tree };

/// Metric used for neighbor search. `torus` wraps every coordinate with period
/// one and is meant for points in [0,1)^d.
enum class Geometry { cube, torus };

struct NnOptions {
  NnMethod method = NnMethod::tree;
  Geometry geometry = Geometry::cube;
  /// Reject coincident points instead of resolving the zero-distance tie.
  bool strict = false;
};

/// Directed nearest-neighbor graph: edge i -> nn_index[i].
/// Indices are 0-based; ties in distance go to the smallest index.
struct NnGraph {
  std::vector<std::uint32_t> nn_index;
  std::vector<std::uint32_t> in_degree;

  std::size_t size() const noexcept { return nn_index.size(); }
  std::uint32_t max_in_degree() const noexcept;

  /// Builds a graph from a neighbor map, validating it and deriving degrees.
  static NnGraph from_neighbors(std::vector<std::uint32_t> nn_index);
};

/// Ordered motif counts of an NnGraph.
struct MotifCounts {
  /// #{ordered (i, j): i -> j and j -> i}
  std::uint64_t pair_count = 0;
  /// #{ordered distinct (i, j, k): i -> k and j -> k}
  std::uint64_t triple_count = 0;
  std::size_t n = 0;
};

/// Computes N(i) for every point. Trees fall back to brute force for d > 20.
/// Throws InvalidInput for fewer than two points, DuplicatePoint in strict mode.
NnGraph build_nn_graph(const PointCloud& cloud, const NnOptions& options = {});

MotifCounts count_motifs(const NnGraph& graph);

/// Squared distance between two points under the given geometry. Both search
/// methods call this, so their outputs compare exactly.
double squared_distance(std::span<const double> a, std::span<const double> b,
                        Geometry geometry) noexcept;

struct EmpiricalConstants {
  double q_hat = 0.0;
  double o_hat = 0.0;
  double q_stderr = 0.0;
  double o_stderr = 0.0;
  /// Largest in-degree seen across all replicates.
  std::uint32_t max_in_degree = 0;
};

/// Averages pair_count / n and triple_count / n over `reps` clouds of `n`
/// uniform points in [0,1]^m. Replicate r draws from substream (seed, r), so
/// the result does not depend on the thread count.
EmpiricalConstants estimate_constants_empirical(int m, std::size_t n, int reps,
                                                Geometry geometry, std::uint64_t seed);

}  // namespace xicor
