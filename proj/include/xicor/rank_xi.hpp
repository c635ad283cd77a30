#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xicor/nn_graph.hpp"

namespace xicor {

enum class TiePolicy { permissive, strict };

/// ranks[i] = #{j : y_j <= y_i}. Tied values share the largest rank.
struct RankVector {
  std::vector<std::uint32_t> ranks;

  std::size_t size() const noexcept { return ranks.size(); }
  /// True when every response value is equal (all ranks equal n).
  bool constant() const noexcept;
};

/// Throws InvalidInput for n < 2 or non-finite values, TieError on ties in
/// strict mode.
RankVector compute_ranks(std::span<const double> y, TiePolicy ties = TiePolicy::permissive);

struct XiStatistic {
  double value = 0.0;
  std::size_t n = 0;
};

struct XiOptions {
  NnOptions graph{};
  TiePolicy ties = TiePolicy::permissive;
};

/// xi_n = 6/(n^2-1) * sum_i min(R_i, R_N(i)) - (2n+1)/(n-1).
///
/// The rank sum is accumulated in integers and combined into the single
/// quotient (6S - (2n+1)(n+1)) / (n^2 - 1).
XiStatistic xi_n(const PointCloud& x, std::span<const double> y, const XiOptions& options = {});

/// xi_n from a prebuilt graph and ranks (used when the graph is reused, e.g.
/// under permutations of the response).
XiStatistic xi_n(const NnGraph& graph, std::span<const std::uint32_t> ranks);

/// Integer rank sum sum_i min(R_i, R_N(i)).
std::uint64_t min_rank_sum(const NnGraph& graph, std::span<const std::uint32_t> ranks);

/// Maps an integer rank sum to xi_n.
double xi_from_rank_sum(std::uint64_t rank_sum, std::size_t n);

struct MomentEstimates {
  double mean = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

/// Monte Carlo moments of A_ij = 6 min(U_i, U_j) - 2 for i.i.d. uniforms:
/// E A_ij, E A_ij^2 and E A_ij A_ik. Requires samples >= 1e4.
MomentEstimates a_moment_oracle(std::uint64_t samples, std::uint64_t seed);

}  // namespace xicor
