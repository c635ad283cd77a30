#include "xicor/null_constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "om_kernel.hpp"
#include "xicor/error.hpp"
#include "xicor/random.hpp"
#include "xicor/special.hpp"

namespace xicor {

namespace {

void require_dimension(int m) {
  if (m < 1) throw InvalidInput("dimension m must be >= 1, got " + std::to_string(m));
}

// Volume of the part of a radius-r ball lying beyond a hyperplane at signed
// distance `a` from its center.
double cap_volume(int m, double unit_volume, double r, double a) {
  const double full = unit_volume * std::pow(r, m);
  if (a >= r) return 0.0;
  if (a <= -r) return full;
  const double t = a / r;
  const double half_cap =
      0.5 * full * reg_incomplete_beta(std::max(0.0, 1.0 - t * t), 0.5 * (m + 1), 0.5);
  return a >= 0.0 ? half_cap : full - half_cap;
}

double intersection_with_volume(int m, double unit_volume, double r1, double r2,
                                double dist) {
  if (dist >= r1 + r2) return 0.0;
  if (dist <= std::fabs(r1 - r2)) return unit_volume * std::pow(std::min(r1, r2), m);
  const double a1 = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
  const double a2 = dist - a1;
  return cap_volume(m, unit_volume, r1, a1) + cap_volume(m, unit_volume, r2, a2);
}

void check_radii(double r1, double r2, double dist) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2)) {
    throw InvalidInput("ball radii must be positive and finite");
  }
  if (!(dist >= 0.0) || !std::isfinite(dist)) {
    throw InvalidInput("center distance must be non-negative and finite");
  }
}

}  // namespace

namespace detail {

BlockSums om_block(int m, double unit_volume, std::uint64_t count, std::uint64_t seed,
                   std::uint64_t block) {
  Rng rng = make_rng(seed, {block});
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> u1(static_cast<std::size_t>(m));
  std::vector<double> u2(static_cast<std::size_t>(m));
  const double inv_m = 1.0 / m;

  auto draw_direction = [&](std::vector<double>& u) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& c : u) {
        c = normal(rng);
        norm2 += c * c;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : u) c *= inv;
  };

  BlockSums sums;
  for (std::uint64_t s = 0; s < count; ++s) {
    const double e1 = expo(rng);
    const double e2 = expo(rng);
    draw_direction(u1);
    draw_direction(u2);
    const double r1 = std::pow(e1 / unit_volume, inv_m);
    const double r2 = std::pow(e2 / unit_volume, inv_m);
    double d2 = 0.0;
    for (int c = 0; c < m; ++c) {
      const double diff = r1 * u1[static_cast<std::size_t>(c)] - r2 * u2[static_cast<std::size_t>(c)];
      d2 += diff * diff;
    }
    const double dist = std::sqrt(d2);
    if (!(std::max(r1, r2) < dist)) continue;
    // exp(V r1^m + V r2^m - union) = exp(intersection); the sampling density
    // cancels both ball volumes exactly.
    const double weight = std::exp(intersection_with_volume(m, unit_volume, r1, r2, dist));
    if (!(weight >= 1.0)) throw std::logic_error("importance weight below 1 on the region");
    sums.sum += weight;
    sums.sum_sq += weight * weight;
  }
  return sums;
}

}  // namespace detail

double ball_volume(int m) {
  if (m < 0) throw InvalidInput("ball dimension must be >= 0");
  double v = (m % 2 == 0) ? 1.0 : 2.0;
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2) v *= 2.0 * std::numbers::pi / k;
  return v;
}

double intersection_volume(int m, double r1, double r2, double dist) {
  require_dimension(m);
  check_radii(r1, r2, dist);
  return intersection_with_volume(m, ball_volume(m), r1, r2, dist);
}

double union_volume(int m, double r1, double r2, double dist) {
  require_dimension(m);
  check_radii(r1, r2, dist);
  const double v = ball_volume(m);
  return v * (std::pow(r1, m) + std::pow(r2, m)) - intersection_with_volume(m, v, r1, r2, dist);
}

double q_m(int m) {
  require_dimension(m);
  return 1.0 / (2.0 - reg_incomplete_beta(0.75, 0.5 * (m + 1), 0.5));
}

MonteCarloEstimate o_m_monte_carlo(int m, std::uint64_t samples, std::uint64_t seed) {
  require_dimension(m);
  if (samples < 100'000) throw InvalidInput("o_m Monte Carlo needs at least 1e5 samples");

  const double v = ball_volume(m);
  const std::uint64_t blocks = (samples + kOmBlockSize - 1) / kOmBlockSize;
  std::vector<detail::BlockSums> partial(blocks);
  const auto sblocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < sblocks; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const std::uint64_t count = std::min(kOmBlockSize, samples - ub * kOmBlockSize);
    partial[ub] = detail::om_block(m, v, count, seed, ub);
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

std::string_view to_string(ConstantSource s) noexcept {
  switch (s) {
    case ConstantSource::closed_form: return "closed_form";
    case ConstantSource::monte_carlo: return "monte_carlo";
    case ConstantSource::table: return "table";
  }
  return "unknown";
}

ConstantSource parse_constant_source(std::string_view text) {
  if (text == "mc" || text == "monte_carlo") return ConstantSource::monte_carlo;
  if (text == "table") return ConstantSource::table;
  if (text == "exact" || text == "closed_form") return ConstantSource::closed_form;
  throw InvalidInput("unknown constants source '" + std::string(text) + "'");
}

NullConstants make_null_constants(int m, double q, double o, double o_stderr,
                                  ConstantSource source) {
  NullConstants c;
  c.m = m;
  c.q_m = q;
  c.o_m = o;
  c.o_m_stderr = o_stderr;
  c.sigma2 = 2.0 / 5.0 + 2.0 / 5.0 * q + 4.0 / 5.0 * o;
  c.source = source;
  return c;
}

NullConstants null_variance(int m, ConstantSource source, std::uint64_t o_samples,
                            std::uint64_t seed) {
  require_dimension(m);
  switch (source) {
    case ConstantSource::table:
      if (m > static_cast<int>(kTableQ.size())) {
        throw InvalidInput("tabulated constants only cover m = 1..10");
      }
      return make_null_constants(m, kTableQ[static_cast<std::size_t>(m - 1)],
                                 kTableO[static_cast<std::size_t>(m - 1)], 0.0, source);
    case ConstantSource::closed_form:
      if (m != 1) throw InvalidInput("closed-form o_m is only known for m = 1");
      return make_null_constants(1, 2.0 / 3.0, 0.5, 0.0, source);
    case ConstantSource::monte_carlo: {
      const MonteCarloEstimate o = o_m_monte_carlo(m, o_samples, seed);
      return make_null_constants(m, q_m(m), o.estimate, o.std_error, source);
    }
  }
  throw InvalidInput("unknown constants source");
}

NullConstants NullConstantsCache::get(int m) {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(m);
  if (it == cache_.end()) {
    it = cache_.emplace(m, null_variance(m, source_, o_samples_, seed_)).first;
  }
  return it->second;
}

}  // namespace xicor
