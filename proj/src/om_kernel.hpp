#pragma once

// Internal: per-block kernel shared by the OpenMP and serial o_m estimators.

#include <cstdint>

namespace xicor::detail {

struct BlockSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

/// Evaluates `count` importance-sampling draws from substream (seed, block).
BlockSums om_block(int m, double unit_volume, std::uint64_t count, std::uint64_t seed,
                   std::uint64_t block);

}  // namespace xicor::detail
