#include "xicor/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace xicor {

namespace {

// Slack on pruning so rounding in the box bound can never discard a point that
// ties the current best.
constexpr double kPruneSlack = 1.0 + 1e-12;

inline double interval_gap(double q, double lo, double hi) noexcept {
  if (q < lo) return lo - q;
  if (q > hi) return q - hi;
  return 0.0;
}

}  // namespace

KdTree::KdTree(const Matrix& points, Geometry geometry, std::size_t leaf_size)
    : points_(points),
      geometry_(geometry),
      leaf_size_(std::max<std::size_t>(leaf_size, 1)),
      dim_(points.cols()),
      order_(points.rows()) {
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points.rows() / leaf_size_ + 2);
  if (!order_.empty()) build(0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1});
  lo_.resize(lo_.size() + dim_, std::numeric_limits<double>::infinity());
  hi_.resize(hi_.size() + dim_, -std::numeric_limits<double>::infinity());

  double* lo = lo_.data() + static_cast<std::size_t>(id) * dim_;
  double* hi = hi_.data() + static_cast<std::size_t>(id) * dim_;
  for (std::uint32_t k = begin; k < end; ++k) {
    auto p = points_.row(order_[k]);
    for (std::size_t c = 0; c < dim_; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  if (end - begin <= leaf_size_) return id;

  std::size_t split_dim = 0;
  double widest = -1.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (hi[c] - lo[c] > widest) {
      widest = hi[c] - lo[c];
      split_dim = c;
    }
  }
  // All points coincide: nothing to split on.
  if (widest <= 0.0) return id;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_(a, split_dim) < points_(b, split_dim);
                   });
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double KdTree::box_bound(std::int32_t node, std::span<const double> q) const noexcept {
  const double* lo = lo_.data() + static_cast<std::size_t>(node) * dim_;
  const double* hi = hi_.data() + static_cast<std::size_t>(node) * dim_;
  double sum = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    double gap = interval_gap(q[c], lo[c], hi[c]);
    if (geometry_ == Geometry::torus) {
      gap = std::min({gap, interval_gap(q[c] - 1.0, lo[c], hi[c]),
                      interval_gap(q[c] + 1.0, lo[c], hi[c])});
    }
    sum += gap * gap;
  }
  return sum;
}

void KdTree::search(std::int32_t node_id, std::span<const double> q, std::size_t self,
                    Neighbor& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      const std::uint32_t j = order_[k];
      if (j == self) continue;
      const double d = squared_distance(q, points_.row(j), geometry_);
      if (d < best.squared_distance || (d == best.squared_distance && j < best.index)) {
        best = {j, d};
      }
    }
    return;
  }
  const double bl = box_bound(node.left, q);
  const double br = box_bound(node.right, q);
  const bool left_first = bl <= br;
  const std::int32_t first = left_first ? node.left : node.right;
  const std::int32_t second = left_first ? node.right : node.left;
  const double b_first = left_first ? bl : br;
  const double b_second = left_first ? br : bl;
  if (b_first <= best.squared_distance * kPruneSlack) search(first, q, self, best);
  if (b_second <= best.squared_distance * kPruneSlack) search(second, q, self, best);
}

Neighbor KdTree::nearest_excluding(std::size_t query) const {
  Neighbor best{UINT32_MAX, std::numeric_limits<double>::infinity()};
  if (!nodes_.empty()) search(0, points_.row(query), query, best);
  return best;
}

}  // namespace xicor
