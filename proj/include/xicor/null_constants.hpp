#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string_view>

namespace xicor {

/// Volume of the unit ball in R^m, by the exact two-step recursion
/// V_m = V_{m-2} * 2 pi / m.
double ball_volume(int m);

/// Volume of B(w1, r1) ∩ B(w2, r2) in R^m with |w1 - w2| = dist.
double intersection_volume(int m, double r1, double r2, double dist);

/// Volume of B(w1, r1) ∪ B(w2, r2) in R^m with |w1 - w2| = dist.
double union_volume(int m, double r1, double r2, double dist);

/// Limiting mutual-pair rate of the NN graph on an m-dimensional manifold,
/// {2 - I_{3/4}((m+1)/2, 1/2)}^{-1}.
double q_m(int m);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo value of the shared-parent constant o_m: the integral of
/// exp(-λ{B(w1,|w1|) ∪ B(w2,|w2|)}) over max(|w1|,|w2|) < |w1 - w2|.
///
/// w1, w2 are drawn i.i.d. from the density exp(-V_m |w|^m) (radius from
/// V_m r^m ~ Exp(1), uniform direction), giving the weight
/// exp(λ(B1 ∩ B2)) >= 1 on the region. Samples are split into fixed-size
/// blocks, each with its own substream of `seed`, and summed in block order,
/// so the estimate is identical for any thread count.
/// Throws InvalidInput for m < 1 or samples < 1e5.
MonteCarloEstimate o_m_monte_carlo(int m, std::uint64_t samples, std::uint64_t seed);

/// Samples per substream block in o_m_monte_carlo.
inline constexpr std::uint64_t kOmBlockSize = 8192;

enum class ConstantSource { closed_form, monte_carlo, table };

std::string_view to_string(ConstantSource s) noexcept;
ConstantSource parse_constant_source(std::string_view text);

struct NullConstants {
  int m = 0;
  double q_m = 0.0;
  double o_m = 0.0;
  double sigma2 = 0.0;
  double o_m_stderr = 0.0;
  ConstantSource source = ConstantSource::monte_carlo;
};

/// Assembles a NullConstants record; sigma2 = 2/5 + (2/5) q + (4/5) o.
NullConstants make_null_constants(int m, double q, double o, double o_stderr,
                                  ConstantSource source);

/// Published two-decimal constants for m = 1..10.
inline constexpr std::array<double, 10> kTableQ = {0.67, 0.62, 0.59, 0.57, 0.56,
                                                   0.55, 0.54, 0.53, 0.53, 0.52};
inline constexpr std::array<double, 10> kTableO = {0.49, 0.63, 0.71, 0.76, 0.79,
                                                   0.84, 0.86, 0.90, 0.98, 1.00};

inline constexpr std::uint64_t kDefaultOmSamples = 1'000'000;

/// Null variance of sqrt(n) xi_n for manifold dimension m.
///  - monte_carlo: exact q_m, o_m from o_m_monte_carlo(m, o_samples, seed)
///  - table: both published constants (m <= 10 only)
///  - closed_form: q = 2/3, o = 1/2 (m = 1 only)
NullConstants null_variance(int m, ConstantSource source = ConstantSource::monte_carlo,
                            std::uint64_t o_samples = kDefaultOmSamples,
                            std::uint64_t seed = 20240101);

/// Thread-safe per-m memo of null_variance with fixed settings.
class NullConstantsCache {
 public:
  explicit NullConstantsCache(ConstantSource source = ConstantSource::monte_carlo,
                              std::uint64_t o_samples = kDefaultOmSamples,
                              std::uint64_t seed = 20240101)
      : source_(source), o_samples_(o_samples), seed_(seed) {}

  NullConstants get(int m);

 private:
  ConstantSource source_;
  std::uint64_t o_samples_;
  std::uint64_t seed_;
  std::mutex mutex_;
  std::map<int, NullConstants> cache_;
};

}  // namespace xicor
