#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xicor/matrix.hpp"
#include "xicor/nn_graph.hpp"

namespace xicor {

struct Neighbor {
  std::uint32_t index = UINT32_MAX;
  double squared_distance = 0.0;
};

/// Axis-aligned space-partitioning tree over the rows of a matrix. The tree
/// keeps a reference to the matrix, which must outlive it.
class KdTree {
 public:
  KdTree(const Matrix& points, Geometry geometry, std::size_t leaf_size = 8);

  /// Nearest row to row `query` other than itself; equal distances resolve to
  /// the smallest row index, exactly as a linear scan would.
  Neighbor nearest_excluding(std::size_t query) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  double box_bound(std::int32_t node, std::span<const double> q) const noexcept;
  void search(std::int32_t node, std::span<const double> q, std::size_t self,
              Neighbor& best) const;

  const Matrix& points_;
  Geometry geometry_;
  std::size_t leaf_size_;
  std::size_t dim_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace xicor
