#pragma once

#include "gibbslab/landscape.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gibbslab {

/// Which constant multiplies gamma/m in the generalization term.
enum class GenBoundVariant {
  theorem,           ///< 4 sigma^2 gamma / m
  hoeffding_stated,  ///< M^2 gamma / (2m)
};

std::string to_string(GenBoundVariant v);
GenBoundVariant gen_bound_variant_from_string(const std::string& s);

struct GibbsConfig {
  double gamma = 1.0;
  double lambda = 0.0;
  double m = 1.0;
  double loss_bound = 1.0;  ///< M
  double sigma = 0.5;       ///< sub-Gaussian parameter
  GenBoundVariant variant = GenBoundVariant::hoeffding_stated;

  /// ArgumentError naming the first violated field.
  void validate() const;
};

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

/// Every term of one bound at one configuration. `total` is the sum of `terms`;
/// `details` are auxiliary quantities that do not enter the sum.
struct BoundReport {
  std::string theorem;
  GibbsConfig config;
  double radius = 0.0;
  std::optional<double> p;
  std::vector<BoundTerm> terms;
  std::vector<BoundTerm> details;
  double total = 0.0;
  bool heuristic_weights = false;
  std::optional<double> oracle;
  std::optional<double> oracle_se;
  std::optional<double> margin;

  double term(const std::string& name) const;
  double detail(const std::string& name) const;
  void attach_oracle(double value, double standard_error = 0.0);
};

/// tr(H (H + 2 lambda I)^{-1}) = sum_k l_k / (l_k + 2 lambda), zero eigenvalues dropped.
double effective_dimension(const Matrix& h, double lambda);

/// L*(r) (r / sqrt(lambda_min + lambda))^3.
double epsilon_r(const MinimumDescriptor& minimum, double r, double lambda);

/// 4 sigma^2 gamma / m or M^2 gamma / (2m) per config.variant.
double generalization_bound(const GibbsConfig& config);

/// Localized excess risk of one minimum with explicit constants.
BoundReport local_excess_bound(const MinimumDescriptor& minimum, const GibbsConfig& config, double r);

struct MinimaDistribution {
  std::vector<double> upper;   ///< upper bounds on pi_{gamma,r}(i), in input order
  std::vector<double> limit;   ///< pi_infinity(i), in input order
};

MinimaDistribution minima_distribution(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config,
                                       double r);

struct EllipsoidMassBounds {
  std::optional<double> upper;
  std::optional<double> lower_with_z;
  double lower_free = 0.0;
  std::optional<double> upper_clamped;
  std::optional<double> lower_with_z_clamped;
  double lower_free_clamped = 0.0;
};

/// Gibbs mass of the curvature ellipsoid of radius r. `z` is the normalization
/// of e^{-gamma R_lambda}; the Z-dependent bounds are absent without it.
EllipsoidMassBounds ellipsoid_mass_bounds(const MinimumDescriptor& minimum, const GibbsConfig& config, double r,
                                          std::optional<double> z = std::nullopt);

struct ClampedValue {
  double raw = 0.0;
  double clamped = 0.0;
};

/// alpha_{d/2}: 1 for d = 1, Gamma(1 + d/2)^{-2/d} otherwise.
double complement_alpha(std::size_t d);

/// 1 - (1 - d e^{-r^2 gamma alpha_{d/2}}) sum_i e^{-gamma eps_i / 3}. RadiusError unless 0 < r <= r0.
ClampedValue complement_mass_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config,
                                   double r, double r0);

/// r = gamma^{(p-1)/2}, p in (0, 1/3].
double tune_radius(double gamma, double p);

/// Global excess risk with explicit constants. Without `weights` the expectation uses the
/// renormalized upper bounds of minima_distribution and the report is flagged heuristic.
BoundReport global_excess_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config, double r,
                                double r0, const std::optional<std::vector<double>>& weights = std::nullopt);

/// Asymptotic pseudo excess risk: expectations under pi_infinity.
BoundReport pseudo_excess_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config, double r);

}  // namespace gibbslab
