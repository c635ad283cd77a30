#include "xicor/rank_xi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xicor/error.hpp"
#include "xicor/random.hpp"

namespace xicor {

namespace {
__extension__ using Int128 = __int128;
}  // namespace

bool RankVector::constant() const noexcept {
  return !ranks.empty() &&
         std::all_of(ranks.begin(), ranks.end(), [n = ranks.size()](std::uint32_t r) { return r == n; });
}

RankVector compute_ranks(std::span<const double> y, TiePolicy ties) {
  const std::size_t n = y.size();
  if (n < 2) throw InvalidInput("ranking needs at least 2 values");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(y[i])) throw InvalidInput("non-finite response at index " + std::to_string(i));
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return y[a] < y[b]; });

  RankVector out;
  out.ranks.resize(n);
  std::size_t k = 0;
  while (k < n) {
    std::size_t last = k;
    while (last + 1 < n && y[order[last + 1]] == y[order[k]]) ++last;
    if (last > k && ties == TiePolicy::strict) {
      throw TieError("tied responses at indices " + std::to_string(order[k]) + " and " +
                     std::to_string(order[k + 1]));
    }
    for (std::size_t t = k; t <= last; ++t) out.ranks[order[t]] = static_cast<std::uint32_t>(last + 1);
    k = last + 1;
  }
  return out;
}

std::uint64_t min_rank_sum(const NnGraph& graph, std::span<const std::uint32_t> ranks) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    sum += std::min(ranks[i], ranks[graph.nn_index[i]]);
  }
  return sum;
}

double xi_from_rank_sum(std::uint64_t rank_sum, std::size_t n) {
  const auto nn = static_cast<Int128>(n);
  const Int128 numerator = 6 * static_cast<Int128>(rank_sum) - (2 * nn + 1) * (nn + 1);
  const Int128 denominator = nn * nn - 1;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

XiStatistic xi_n(const NnGraph& graph, std::span<const std::uint32_t> ranks) {
  const std::size_t n = graph.size();
  if (ranks.size() != n) {
    throw InvalidInput("rank vector has " + std::to_string(ranks.size()) + " entries, graph has " +
                       std::to_string(n));
  }
  if (n < 3) throw InvalidInput("xi_n needs n >= 3");
  return {xi_from_rank_sum(min_rank_sum(graph, ranks), n), n};
}

XiStatistic xi_n(const PointCloud& x, std::span<const double> y, const XiOptions& options) {
  if (x.size() != y.size()) {
    throw InvalidInput("x has " + std::to_string(x.size()) + " rows but y has " +
                       std::to_string(y.size()) + " values");
  }
  if (x.size() < 3) throw InvalidInput("xi_n needs n >= 3");
  const RankVector r = compute_ranks(y, options.ties);
  const NnGraph g = build_nn_graph(x, options.graph);
  return xi_n(g, r.ranks);
}

MomentEstimates a_moment_oracle(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 10'000) throw InvalidInput("moment oracle needs at least 1e4 samples");
  constexpr std::uint64_t kBlock = 1 << 16;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  struct Sums {
    double a = 0.0, a2 = 0.0, aa = 0.0;
  };
  std::vector<Sums> partial(blocks);
  const auto sblocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < sblocks; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    Rng rng = make_rng(seed, {ub});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::uint64_t count = std::min(kBlock, samples - ub * kBlock);
    Sums s;
    for (std::uint64_t t = 0; t < count; ++t) {
      const double ui = unif(rng);
      const double uj = unif(rng);
      const double uk = unif(rng);
      const double aij = 6.0 * std::min(ui, uj) - 2.0;
      const double aik = 6.0 * std::min(ui, uk) - 2.0;
      s.a += aij;
      s.a2 += aij * aij;
      s.aa += aij * aik;
    }
    partial[ub] = s;
  }
  Sums total;
  for (const auto& p : partial) {
    total.a += p.a;
    total.a2 += p.a2;
    total.aa += p.aa;
  }
  const double n = static_cast<double>(samples);
  return {total.a / n, total.a2 / n, total.aa / n};
}

}  // namespace xicor
