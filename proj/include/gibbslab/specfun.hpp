#pragma once

#include "gibbslab/linalg.hpp"

#include <optional>

namespace gibbslab {

/// Regularized lower incomplete gamma P(a, z) = gamma(a, z) / Gamma(a).
/// Series below z = a + 1, Lentz continued fraction for Q above. a <= 0 or z < 0 throws.
double regularized_gamma_P(double a, double z);
double regularized_gamma_Q(double a, double z);

/// alpha_a of the lower bound: 1 for a <= 1, Gamma(1 + a)^(-1/a) above.
double gamma_lower_alpha(double a);

/// (1 - e^{-alpha_a z})^a, a lower bound on P(a, z).
double regularized_gamma_lower(double a, double z);

/// Chi-square CDF with k degrees of freedom: P(k/2, x/2).
double chi2_cdf(double k, double x);

/// F_{d+2}(x) / F_d(x), evaluated without cancellation or underflow for small x.
double chi2_cdf_ratio(double d, double x);

/// E[x^T A x | x^T M^{-1} x <= r^2] for x ~ N(0, M).
double truncated_quadratic_moment(const Matrix& a, const Matrix& m, double r);

/// Integral of e^{-gamma |u|^2 / 2} over the ball of radius r in R^d, or of
/// e^{-gamma u^T A u / 2} over the ellipsoid u^T A u <= r^2 when `metric` is given.
/// r may be +infinity.
double gaussian_region_integral(double gamma, double r, std::size_t d, const std::optional<Matrix>& metric = std::nullopt);

}  // namespace gibbslab
