#include "gibbslab/oracle.hpp"

#include "gibbslab/errors.hpp"
#include "gibbslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gibbslab {

Estimate estimate_mean(const std::vector<double>& values) {
  if (values.empty()) throw ArgumentError("estimate_mean: no values");
  Estimate e;
  e.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(e.count);
  if (e.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    const double sd = std::sqrt(ss / static_cast<double>(e.count - 1));
    e.standard_error = sd / std::sqrt(static_cast<double>(e.count));
  }
  e.half_width = 2.0 * e.standard_error;
  return e;
}

Estimate empirical_excess_risk(const Landscape& landscape, const MinimumDescriptor& minimum, const ChainBatch& batch,
                               double r) {
  if (!batch.conditioned) throw ContractError("empirical_excess_risk: batch must be conditioned on the ellipsoid");
  if (batch.samples.size() < kMinConditionedSamples) {
    throw ContractError("empirical_excess_risk: fewer than 100 conditioned samples");
  }
  if (!(r > 0.0)) throw ArgumentError("empirical_excess_risk: r must be positive");
  std::vector<double> excess;
  excess.reserve(batch.samples.size());
  for (const Vector& w : batch.samples) excess.push_back(landscape.value(w) - minimum.risk_value);
  return estimate_mean(excess);
}

namespace {

double default_eta(SamplerKind kind, const Objective& f, double gamma) {
  const Vector c = f.domain().center();
  if (kind == SamplerKind::sgld) return default_step_size(f, gamma, c);
  // Metropolis proposal sd of one posterior standard deviation at the start.
  return std::sqrt(2.0 * default_step_size(f, gamma, c));
}

}  // namespace

Estimate empirical_generalization_gap(const DataModelPtr& model, const GibbsConfig& config, std::size_t trials,
                                      std::uint64_t master_seed, const GapSettings& settings) {
  if (!model) throw ArgumentError("empirical_generalization_gap: null data model");
  config.validate();
  if (trials < 50) throw ArgumentError("empirical_generalization_gap: need at least 50 trials");
  const SamplerKind kind = settings.kind.value_or(model->has_constant_hessian() ? SamplerKind::exact_gaussian
                                                                                : SamplerKind::metropolis);
  const std::size_t burn_in = settings.burn_in.value_or(settings.steps / 5);
  const auto m = static_cast<std::size_t>(config.m);
  const Landscape& landscape = model->landscape();

  std::vector<double> gaps(trials);
  parallel_for(trials, settings.workers, [&](std::size_t t) {
    const std::uint64_t seed = chain_seed(master_seed, t);
    const EmpiricalObjective f(model, model->draw_sample(m, seed), config.lambda);
    const double eta = settings.eta.value_or(kind == SamplerKind::exact_gaussian ? 0.0 : default_eta(kind, f, config.gamma));
    ChainBatch batch = sample_chain(kind, f, config, eta, settings.steps, burn_in, seed, 0);
    if (settings.region) batch = condition_on_region(batch, *settings.region);
    double sum = 0.0;
    for (const Vector& w : batch.samples) sum += landscape.value(w) - f.unregularized(w);
    gaps[t] = sum / static_cast<double>(batch.samples.size());
  });
  return estimate_mean(gaps);
}

Estimate quadrature_local_excess(const DataModelPtr& model, const MinimumDescriptor& minimum,
                                 const GibbsConfig& config, double r, std::size_t datasets, std::uint64_t master_seed,
                                 const QuadratureSettings& settings) {
  if (!model) throw ArgumentError("quadrature_local_excess: null data model");
  config.validate();
  if (datasets == 0) throw ArgumentError("quadrature_local_excess: need at least one dataset");
  const auto m = static_cast<std::size_t>(config.m);
  const Landscape& landscape = model->landscape();
  const double base = minimum.risk_value;
  const std::vector<Integrand> excess = {[&](const Vector& w) { return landscape.value(w) - base; }};
  std::vector<double> values;
  for (std::size_t t = 0; t < datasets; ++t) {
    const EmpiricalObjective f(model, model->draw_sample(m, chain_seed(master_seed, t)), config.lambda);
    const QuadratureResult q = quadrature_measure(f, config.gamma, {minimum.ellipsoid(r)}, excess, settings);
    values.push_back(q.conditional[0][0]);
  }
  return estimate_mean(values);
}

double irm_objective(const std::vector<double>& density, const Integrand& risk, double gamma, double lambda,
                     const QuadratureGrid& grid) {
  const std::size_t n = grid.size();
  if (density.size() != n) throw ArgumentError("irm_objective: density size differs from the grid");
  if (!(gamma > 0.0)) throw ArgumentError("irm_objective: gamma must be positive");
  if (!(lambda >= 0.0)) throw ArgumentError("irm_objective: lambda must be nonnegative");
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(density[i] >= 0.0)) throw ArgumentError("irm_objective: density must be nonnegative");
    mass += grid.weight(i) * density[i];
  }
  if (std::abs(mass - 1.0) > 1e-9) throw ArgumentError("irm_objective: density does not integrate to 1");

  std::vector<double> log_q(n);
  double shift = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    log_q[i] = -gamma * lambda * grid.point(i).squaredNorm();
    shift = std::min(shift, -log_q[i]);
  }
  double q_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) q_mass += grid.weight(i) * std::exp(log_q[i] + shift);
  const double log_norm = std::log(q_mass) - shift;

  double expected = 0.0;
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (density[i] == 0.0) continue;
    const double wp = grid.weight(i) * density[i];
    expected += wp * risk(grid.point(i));
    kl += wp * (std::log(density[i]) - (log_q[i] - log_norm));
  }
  return expected + kl / gamma;
}

namespace {

enum class Scheme { central, forward, backward };

std::vector<Scheme> schemes_for(double x, double h, const std::vector<double>& junctions) {
  for (double j : junctions) {
    if (std::abs(x - j) >= 2.0 * h) continue;
    if (x == j) return {Scheme::forward, Scheme::backward};
    return {j < x ? Scheme::forward : Scheme::backward};
  }
  return {Scheme::central};
}

struct Differences {
  double value;
  Vector gradient;
};

Differences differentiate(const JetFunction& jet, const Vector& w, Eigen::Index k, double h, Scheme s) {
  auto at = [&](double step) {
    Vector p = w;
    p[k] += step;
    return jet(p);
  };
  switch (s) {
    case Scheme::central: {
      const RiskJet a = at(h);
      const RiskJet b = at(-h);
      return {(a.value - b.value) / (2.0 * h), (a.gradient - b.gradient) / (2.0 * h)};
    }
    case Scheme::forward: {
      const RiskJet a = jet(w);
      const RiskJet b = at(h);
      const RiskJet c = at(2.0 * h);
      return {(-3.0 * a.value + 4.0 * b.value - c.value) / (2.0 * h),
              (-3.0 * a.gradient + 4.0 * b.gradient - c.gradient) / (2.0 * h)};
    }
    case Scheme::backward: {
      const RiskJet a = jet(w);
      const RiskJet b = at(-h);
      const RiskJet c = at(-2.0 * h);
      return {(3.0 * a.value - 4.0 * b.value + c.value) / (2.0 * h),
              (3.0 * a.gradient - 4.0 * b.gradient + c.gradient) / (2.0 * h)};
    }
  }
  return {0.0, Vector()};
}

}  // namespace

DerivativeReport derivative_check(const JetFunction& jet, const std::vector<Vector>& probes,
                                  const std::vector<std::vector<double>>& junctions) {
  DerivativeReport report;
  for (const Vector& w : probes) {
    const RiskJet analytic = jet(w);
    const double h = 1e-4 * (1.0 + w.norm());
    const double gscale = std::max(1.0, analytic.gradient.norm());
    const double hscale = std::max(1.0, analytic.hessian.norm());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const std::vector<double> none;
      const auto& js = ku < junctions.size() ? junctions[ku] : none;
      for (Scheme s : schemes_for(w[k], h, js)) {
        const Differences fd = differentiate(jet, w, k, h, s);
        report.max_gradient_error =
            std::max(report.max_gradient_error, std::abs(fd.value - analytic.gradient[k]) / gscale);
        report.max_hessian_error =
            std::max(report.max_hessian_error, (fd.gradient - analytic.hessian.col(k)).norm() / hscale);
      }
    }
    ++report.probes;
  }
  return report;
}

DerivativeReport derivative_check(const Landscape& landscape, const std::vector<Vector>& probes) {
  for (const Vector& w : probes) {
    if (!landscape.domain().contains(w)) throw DomainError("derivative_check: probe outside the domain");
  }
  return derivative_check([&](const Vector& w) { return landscape.jet(w); }, probes, landscape.junctions());
}

DerivativeReport derivative_check(const DataModel& model, const std::vector<Vector>& probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DerivativeReport total;
  for (const Vector& w : probes) {
    if (!model.landscape().domain().contains(w)) throw DomainError("derivative_check: probe outside the domain");
    const Vector z = model.draw_example(rng);
    const DerivativeReport r =
        derivative_check([&](const Vector& p) { return model.loss_jet(p, z); }, {w}, model.landscape().junctions());
    total.max_gradient_error = std::max(total.max_gradient_error, r.max_gradient_error);
    total.max_hessian_error = std::max(total.max_hessian_error, r.max_hessian_error);
    ++total.probes;
  }
  return total;
}

}  // namespace gibbslab
