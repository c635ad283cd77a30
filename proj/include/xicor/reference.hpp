#pragma once

// Serial reference implementations of the OpenMP kernels. They are kept
// deliberately plain and are used by the test suite and the benchmark to check
// that the parallel kernels give identical results.

#include <cstdint>

#include "xicor/nn_graph.hpp"
#include "xicor/null_constants.hpp"

namespace xicor::reference {

/// Linear scan over all pairs; ties resolved to the smallest index.
NnGraph nn_graph_brute(const PointCloud& cloud, Geometry geometry = Geometry::cube);

/// Counts ordered shared-parent triples by enumerating vertex pairs, O(n^2).
std::uint64_t count_triples_enumerate(const NnGraph& graph);

/// Counts ordered mutual pairs by enumerating vertex pairs, O(n^2).
std::uint64_t count_pairs_enumerate(const NnGraph& graph);

/// Same block decomposition and reduction order as o_m_monte_carlo, run on a
/// single thread.
MonteCarloEstimate o_m_monte_carlo(int m, std::uint64_t samples, std::uint64_t seed);

}  // namespace xicor::reference
