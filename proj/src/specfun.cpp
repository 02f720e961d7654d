#include "gibbslab/specfun.hpp"

#include "gibbslab/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gibbslab {

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// log of z^a e^{-z} / Gamma(a)
double log_prefactor(double a, double z) { return a * std::log(z) - z - std::lgamma(a); }

// sum_{n>=0} z^n / ((a+1)(a+2)...(a+n)); P(a,z) = z^a e^{-z} / Gamma(a+1) * sum.
// Returns sum - 1 so callers can form 1 - 1/sum without cancellation.
double series_tail(double a, double z) {
  double term = 1.0;
  double tail = 0.0;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= z / (a + n);
    tail += term;
    if (term < tail * kEps) return tail;
  }
  throw ArgumentError("regularized gamma series failed to converge");
}

double series_P(double a, double z) {
  const double sum = 1.0 + series_tail(a, z);
  return std::exp(log_prefactor(a, z) - std::log(a)) * sum;
}

// Modified Lentz evaluation of the continued fraction for Q(a, z).
double continued_fraction_Q(double a, double z) {
  double b = z + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return std::exp(log_prefactor(a, z)) * h;
  }
  throw ArgumentError("regularized gamma continued fraction failed to converge");
}

void check_args(double a, double z) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("regularized gamma: a must be positive");
  if (!(z >= 0.0)) throw ArgumentError("regularized gamma: z must be nonnegative");
}

}  // namespace

double regularized_gamma_P(double a, double z) {
  check_args(a, z);
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;
  if (z < a + 1.0) return std::min(1.0, series_P(a, z));
  return std::max(0.0, 1.0 - continued_fraction_Q(a, z));
}

double regularized_gamma_Q(double a, double z) {
  check_args(a, z);
  if (z == 0.0) return 1.0;
  if (std::isinf(z)) return 0.0;
  if (z < a + 1.0) return std::max(0.0, 1.0 - series_P(a, z));
  return std::min(1.0, continued_fraction_Q(a, z));
}

double gamma_lower_alpha(double a) {
  if (!(a > 0.0)) throw ArgumentError("gamma_lower_alpha: a must be positive");
  if (a <= 1.0) return 1.0;
  return std::exp(-std::lgamma(1.0 + a) / a);
}

double regularized_gamma_lower(double a, double z) {
  check_args(a, z);
  // -expm1 keeps accuracy for small alpha z.
  return std::pow(-std::expm1(-gamma_lower_alpha(a) * z), a);
}

double chi2_cdf(double k, double x) {
  if (!(k > 0.0)) throw ArgumentError("chi2_cdf: degrees of freedom must be positive");
  return regularized_gamma_P(0.5 * k, 0.5 * x);
}

double chi2_cdf_ratio(double d, double x) {
  if (!(d > 0.0)) throw ArgumentError("chi2_cdf_ratio: d must be positive");
  if (!(x > 0.0)) throw ArgumentError("chi2_cdf_ratio: x must be positive");
  const double a = 0.5 * d;
  const double z = 0.5 * x;
  if (std::isinf(z)) return 1.0;
  if (z < a + 1.0) {
    // P(a+1, z) = P(a, z) - z^a e^{-z} / Gamma(a+1), so the ratio is tail / (1 + tail).
    const double tail = series_tail(a, z);
    return tail / (1.0 + tail);
  }
  return regularized_gamma_P(a + 1.0, z) / regularized_gamma_P(a, z);
}

double truncated_quadratic_moment(const Matrix& a, const Matrix& m, double r) {
  if (a.rows() != m.rows() || a.cols() != m.cols() || a.rows() != a.cols()) {
    throw ArgumentError("truncated_quadratic_moment: dimension mismatch");
  }
  if (!is_positive_semidefinite(a)) throw ArgumentError("truncated_quadratic_moment: A must be symmetric PSD");
  if (!is_positive_definite(m)) throw ArgumentError("truncated_quadratic_moment: M must be symmetric PD");
  if (!(r > 0.0)) throw ArgumentError("truncated_quadratic_moment: r must be positive");
  const double d = static_cast<double>(a.rows());
  return chi2_cdf_ratio(d, r * r) * (a * m).trace();
}

double gaussian_region_integral(double gamma, double r, std::size_t d, const std::optional<Matrix>& metric) {
  if (!(gamma > 0.0)) throw ArgumentError("gaussian_region_integral: gamma must be positive");
  if (!(r > 0.0)) throw ArgumentError("gaussian_region_integral: r must be positive");
  if (d == 0) throw ArgumentError("gaussian_region_integral: d must be at least 1");
  const double half_d = 0.5 * static_cast<double>(d);
  const double mass = std::isinf(r) ? 1.0 : regularized_gamma_P(half_d, 0.5 * r * r * gamma);
  double value = std::pow(2.0 * std::numbers::pi / gamma, half_d) * mass;
  if (metric) {
    if (static_cast<std::size_t>(metric->rows()) != d || !is_positive_definite(*metric)) {
      throw ArgumentError("gaussian_region_integral: metric must be a d x d positive definite matrix");
    }
    value *= std::exp(-0.5 * log_det_spd(*metric));
  }
  return value;
}

}  // namespace gibbslab
