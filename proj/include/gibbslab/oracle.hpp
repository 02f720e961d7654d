#pragma once

#include "gibbslab/bounds.hpp"
#include "gibbslab/data_model.hpp"
#include "gibbslab/quadrature.hpp"
#include "gibbslab/sampler.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gibbslab {

/// Mean with a normal-approximation 95% interval (half width 2 sd / sqrt(n)).
struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double half_width = 0.0;
  std::size_t count = 0;

  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
};

Estimate estimate_mean(const std::vector<double>& values);

/// Mean of R(w) - R(w*) over a batch conditioned on the ellipsoid of radius r.
/// ContractError for an unconditioned batch.
Estimate empirical_excess_risk(const Landscape& landscape, const MinimumDescriptor& minimum, const ChainBatch& batch,
                               double r);

struct GapSettings {
  /// Defaults to exact_gaussian for constant-Hessian models, metropolis otherwise.
  std::optional<SamplerKind> kind;
  std::size_t steps = 2000;
  std::optional<std::size_t> burn_in;
  /// Metropolis proposal sd or SGLD step; defaults from the objective's curvature.
  std::optional<double> eta;
  std::optional<Region> region;
  std::size_t workers = 1;
};

/// E_S E_{w ~ p_S}[R(w) - R_hat_S(w)] over `trials` fresh samples of size config.m.
Estimate empirical_generalization_gap(const DataModelPtr& model, const GibbsConfig& config, std::size_t trials,
                                      std::uint64_t master_seed, const GapSettings& settings = {});

/// E_S of the quadrature value of E_{p_S}[R(w) - R(w*) | w in E*(r)], where p_S is the
/// empirical Gibbs density, over `datasets` samples of size config.m.
Estimate quadrature_local_excess(const DataModelPtr& model, const MinimumDescriptor& minimum,
                                 const GibbsConfig& config, double r, std::size_t datasets, std::uint64_t master_seed,
                                 const QuadratureSettings& settings = {});

/// E_p[F] + (1/gamma) KL(p || q) on the grid, with q the Gaussian of precision 2 gamma lambda
/// renormalized on the grid (uniform when lambda = 0) and 0 ln 0 = 0.
/// ArgumentError unless the density is nonnegative and integrates to 1 within 1e-9.
double irm_objective(const std::vector<double>& density, const Integrand& risk, double gamma, double lambda,
                     const QuadratureGrid& grid);

struct DerivativeReport {
  double max_gradient_error = 0.0;
  double max_hessian_error = 0.0;
  std::size_t probes = 0;

  double max_error() const { return std::max(max_gradient_error, max_hessian_error); }
};

using JetFunction = std::function<RiskJet(const Vector&)>;

/// Finite differences with h = 1e-4 (1 + |w|) against the analytic jet. Central differences,
/// except one-sided second-order differences on the smooth side of a nearby junction (both sides
/// when the probe sits on it). Error = |fd - analytic| / max(1, |analytic|).
DerivativeReport derivative_check(const JetFunction& jet, const std::vector<Vector>& probes,
                                  const std::vector<std::vector<double>>& junctions = {});
DerivativeReport derivative_check(const Landscape& landscape, const std::vector<Vector>& probes);
/// Checks l(., z) with one example z per probe, drawn from `seed`.
DerivativeReport derivative_check(const DataModel& model, const std::vector<Vector>& probes, std::uint64_t seed);

}  // namespace gibbslab
