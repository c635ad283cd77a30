#pragma once

namespace xicor {

/// Regularized incomplete beta I_x(a, b), accurate to ~1e-14 absolute.
/// Throws InvalidInput unless 0 <= x <= 1, a > 0, b > 0.
double reg_incomplete_beta(double x, double a, double b);

/// Standard normal distribution function.
double normal_cdf(double z) noexcept;

/// Upper tail 1 - Phi(z), without cancellation for large z.
double normal_sf(double z) noexcept;

/// Inverse of normal_cdf, found by bisection on normal_cdf. Requires 0 < p < 1.
double normal_quantile(double p);

}  // namespace xicor
