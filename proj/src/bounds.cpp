#include "gibbslab/bounds.hpp"

#include "gibbslab/errors.hpp"
#include "gibbslab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gibbslab {

std::string to_string(GenBoundVariant v) {
  return v == GenBoundVariant::theorem ? "theorem" : "hoeffding_stated";
}

GenBoundVariant gen_bound_variant_from_string(const std::string& s) {
  if (s == "theorem") return GenBoundVariant::theorem;
  if (s == "hoeffding_stated") return GenBoundVariant::hoeffding_stated;
  throw ArgumentError("unknown generalization bound variant '" + s + "'");
}

void GibbsConfig::validate() const {
  if (!(gamma > 0.0)) throw ArgumentError("gibbs config: gamma must be positive");
  if (!(lambda >= 0.0)) throw ArgumentError("gibbs config: lambda must be nonnegative");
  if (!(m >= 1.0)) throw ArgumentError("gibbs config: m must be at least 1");
  if (!(loss_bound > 0.0)) throw ArgumentError("gibbs config: M must be positive");
  if (!(sigma > 0.0)) throw ArgumentError("gibbs config: sigma must be positive");
}

namespace {

double find(const std::vector<BoundTerm>& list, const std::string& name) {
  for (const auto& t : list) {
    if (t.name == name) return t.value;
  }
  throw ArgumentError("bound report has no entry '" + name + "'");
}

double log_sum_exp(const std::vector<double>& xs) {
  const double top = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - top);
  return top + std::log(sum);
}

void check_lambda(const MinimumDescriptor& minimum, double lambda) {
  if (minimum.lambda != lambda) {
    throw ArgumentError("minimum was enumerated at lambda = " + std::to_string(minimum.lambda) +
                        " but the configuration uses lambda = " + std::to_string(lambda));
  }
}

void finish(BoundReport& report) {
  report.total = 0.0;
  for (const auto& t : report.terms) report.total += t.value;
}

}  // namespace

double BoundReport::term(const std::string& name) const { return find(terms, name); }
double BoundReport::detail(const std::string& name) const { return find(details, name); }

void BoundReport::attach_oracle(double value, double standard_error) {
  oracle = value;
  oracle_se = standard_error;
  margin = total - value;
}

double effective_dimension(const Matrix& h, double lambda) {
  if (!is_symmetric(h)) throw ArgumentError("effective_dimension: H must be symmetric");
  if (!(lambda >= 0.0)) throw ArgumentError("effective_dimension: lambda must be nonnegative");
  if (!is_positive_semidefinite(h)) throw ArgumentError("effective_dimension: H must be PSD");
  const Vector eig = symmetric_eigenvalues(h);
  const double lmax = eig.maxCoeff();
  if (lambda == 0.0 && lmax <= 0.0) {
    throw DegenerateCurvatureError("effective_dimension: H = 0 with lambda = 0");
  }
  const double threshold = kZeroEigenvalueRatio * lmax;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < eig.size(); ++k) {
    if (eig[k] > threshold) sum += eig[k] / (eig[k] + 2.0 * lambda);
  }
  return sum;
}

double epsilon_r(const MinimumDescriptor& minimum, double r, double lambda) {
  if (!(r >= 0.0)) throw ArgumentError("epsilon_r: r must be nonnegative");
  const double denom = minimum.lambda_min + lambda;
  if (!(denom > 0.0)) throw DegenerateCurvatureError("epsilon_r: lambda_min + lambda = 0");
  if (r == 0.0) return 0.0;
  const double lip = minimum.lipschitz ? minimum.lipschitz(r) : 0.0;
  if (lip == 0.0) return 0.0;
  return lip * std::pow(r / std::sqrt(denom), 3);
}

double generalization_bound(const GibbsConfig& config) {
  config.validate();
  if (config.variant == GenBoundVariant::theorem) return 4.0 * config.sigma * config.sigma * config.gamma / config.m;
  return config.loss_bound * config.loss_bound * config.gamma / (2.0 * config.m);
}

namespace {

// tr/gamma + eps/6 + (M/2) sqrt(gamma eps / 3 + gamma gen) + gen
void assemble_explicit(BoundReport& report, double trace, double eps, const GibbsConfig& config) {
  const double gen = generalization_bound(config);
  const double g = config.gamma;
  report.terms = {
      {"effective_dimension", trace / g},
      {"epsilon", eps / 6.0},
      {"curvature_generalization", 0.5 * config.loss_bound * std::sqrt(g * eps / 3.0 + g * gen)},
      {"generalization", gen},
  };
  report.details = {{"trace", trace}, {"eps", eps}, {"gen", gen}};
}

}  // namespace

BoundReport local_excess_bound(const MinimumDescriptor& minimum, const GibbsConfig& config, double r) {
  config.validate();
  check_lambda(minimum, config.lambda);
  BoundReport report;
  report.theorem = "local_excess";
  report.config = config;
  report.radius = r;
  const double eps = epsilon_r(minimum, r, config.lambda);
  assemble_explicit(report, effective_dimension(minimum.hessian, config.lambda), eps, config);
  report.details.push_back({"lipschitz", r > 0.0 && minimum.lipschitz ? minimum.lipschitz(r) : 0.0});
  report.details.push_back({"lipschitz_underestimate", minimum.lipschitz_underestimate ? 1.0 : 0.0});
  finish(report);
  return report;
}

MinimaDistribution minima_distribution(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config,
                                       double r) {
  config.validate();
  if (minima.empty()) throw ArgumentError("minima_distribution: no minima");
  const double g = config.gamma;
  double best = minima.front().regularized_value;
  for (const auto& m : minima) {
    check_lambda(m, config.lambda);
    best = std::min(best, m.regularized_value);
  }
  double max_eps = 0.0;
  for (const auto& m : minima) max_eps = std::max(max_eps, epsilon_r(m, r, config.lambda));

  MinimaDistribution out;
  const std::size_t n = minima.size();
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = minima[i].regularized_value - best;
    for (std::size_t j = 0; j < n; ++j) {
      const double rj = minima[j].regularized_value - best;
      logs[j] = g * (ri - rj) + 0.5 * (minima[i].log_det_regularized - minima[j].log_det_regularized);
    }
    out.upper.push_back(std::exp(g * max_eps / 3.0 - log_sum_exp(logs)));
  }

  std::vector<double> global_logs;
  for (const auto& m : minima) {
    if (m.is_global) global_logs.push_back(m.log_det_regularized);
  }
  if (global_logs.empty()) throw InvariantError("minima_distribution: no minimum is flagged global");
  for (const auto& m : minima) {
    if (!m.is_global) {
      out.limit.push_back(0.0);
      continue;
    }
    std::vector<double> ratios;
    for (double lj : global_logs) ratios.push_back(0.5 * (m.log_det_regularized - lj));
    out.limit.push_back(std::exp(-log_sum_exp(ratios)));
  }
  return out;
}

EllipsoidMassBounds ellipsoid_mass_bounds(const MinimumDescriptor& minimum, const GibbsConfig& config, double r,
                                          std::optional<double> z) {
  config.validate();
  check_lambda(minimum, config.lambda);
  if (!(r > 0.0)) throw ArgumentError("ellipsoid_mass_bounds: r must be positive");
  if (z && !(*z > 0.0)) throw ArgumentError("ellipsoid_mass_bounds: Z must be positive");
  const double g = config.gamma;
  const double d = static_cast<double>(minimum.location.size());
  const double eps = epsilon_r(minimum, r, config.lambda);
  const double p = regularized_gamma_P(0.5 * d, 0.5 * r * r * g);
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };

  EllipsoidMassBounds out;
  out.lower_free = std::exp(-g * eps / 3.0) * p;
  out.lower_free_clamped = clamp01(out.lower_free);
  if (z) {
    const double log_gauss = 0.5 * d * std::log(2.0 * std::numbers::pi / g) + std::log(p) -
                             0.5 * minimum.log_det_regularized - std::log(*z);
    const double base = -g * minimum.regularized_value + log_gauss;
    out.upper = std::exp(base + g * eps / 6.0);
    out.lower_with_z = std::exp(base - g * eps / 6.0);
    out.upper_clamped = clamp01(*out.upper);
    out.lower_with_z_clamped = clamp01(*out.lower_with_z);
  }
  return out;
}

double complement_alpha(std::size_t d) {
  if (d == 0) throw ArgumentError("complement_alpha: d must be positive");
  if (d == 1) return 1.0;
  return std::exp(-2.0 * std::lgamma(1.0 + 0.5 * static_cast<double>(d)) / static_cast<double>(d));
}

namespace {

void check_radius(double r, double r0) {
  if (!(r > 0.0)) throw RadiusError("radius must be positive");
  if (r > r0 * (1.0 + 1e-12)) {
    throw RadiusError("radius " + std::to_string(r) + " exceeds the disjointness radius r0 = " + std::to_string(r0));
  }
}

}  // namespace

ClampedValue complement_mass_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config,
                                   double r, double r0) {
  config.validate();
  if (minima.empty()) throw ArgumentError("complement_mass_bound: no minima");
  check_radius(r, r0);
  const std::size_t d = static_cast<std::size_t>(minima.front().location.size());
  const double g = config.gamma;
  double sum = 0.0;
  for (const auto& m : minima) {
    check_lambda(m, config.lambda);
    sum += std::exp(-g * epsilon_r(m, r, config.lambda) / 3.0);
  }
  const double raw = 1.0 - (1.0 - static_cast<double>(d) * std::exp(-r * r * g * complement_alpha(d))) * sum;
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

double tune_radius(double gamma, double p) {
  if (!(gamma > 0.0)) throw ArgumentError("tune_radius: gamma must be positive");
  if (!(p > 0.0 && p <= 1.0 / 3.0)) throw ArgumentError("tune_radius: p must lie in (0, 1/3]");
  return std::pow(gamma, 0.5 * (p - 1.0));
}

namespace {

BoundReport weighted_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config, double r,
                           const std::vector<double>& weights) {
  double trace = 0.0;
  double eps = 0.0;
  for (std::size_t i = 0; i < minima.size(); ++i) {
    if (weights[i] == 0.0) continue;
    trace += weights[i] * effective_dimension(minima[i].hessian, config.lambda);
    eps += weights[i] * epsilon_r(minima[i], r, config.lambda);
  }
  BoundReport report;
  report.config = config;
  report.radius = r;
  assemble_explicit(report, trace, eps, config);
  for (std::size_t i = 0; i < minima.size(); ++i) {
    report.details.push_back({"weight_" + std::to_string(minima[i].index), weights[i]});
  }
  return report;
}

std::vector<double> normalized(std::vector<double> w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(s > 0.0)) throw InvariantError("expectation weights sum to zero");
  for (double& x : w) x /= s;
  return w;
}

}  // namespace

BoundReport global_excess_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config, double r,
                                double r0, const std::optional<std::vector<double>>& weights) {
  config.validate();
  if (minima.empty()) throw ArgumentError("global_excess_bound: no minima");
  check_radius(r, r0);
  for (const auto& m : minima) check_lambda(m, config.lambda);
  std::vector<double> w;
  bool heuristic = false;
  if (weights) {
    if (weights->size() != minima.size()) throw ArgumentError("global_excess_bound: one weight per minimum required");
    for (double x : *weights) {
      if (!(x >= 0.0)) throw ArgumentError("global_excess_bound: weights must be nonnegative");
    }
    w = normalized(*weights);
  } else {
    w = normalized(minima_distribution(minima, config, r).upper);
    heuristic = true;
  }
  BoundReport report = weighted_bound(minima, config, r, w);
  report.theorem = "global_excess";
  report.heuristic_weights = heuristic;
  const ClampedValue complement = complement_mass_bound(minima, config, r, r0);
  report.terms.push_back({"complement", config.loss_bound * complement.clamped});
  report.details.push_back({"complement_raw", complement.raw});
  report.details.push_back({"complement_clamped", complement.clamped});
  finish(report);
  return report;
}

BoundReport pseudo_excess_bound(const std::vector<MinimumDescriptor>& minima, const GibbsConfig& config, double r) {
  config.validate();
  if (minima.empty()) throw ArgumentError("pseudo_excess_bound: no minima");
  if (!(r >= 0.0)) throw ArgumentError("pseudo_excess_bound: r must be nonnegative");
  for (const auto& m : minima) check_lambda(m, config.lambda);
  BoundReport report = weighted_bound(minima, config, r, minima_distribution(minima, config, r).limit);
  report.theorem = "pseudo_excess";
  finish(report);
  return report;
}

}  // namespace gibbslab
