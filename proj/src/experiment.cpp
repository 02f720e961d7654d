#include "gibbslab/experiment.hpp"

#include "gibbslab/bounds.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/oracle.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/quadrature.hpp"
#include "gibbslab/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace gibbslab {

namespace fs = std::filesystem;

LandscapePtr build_landscape(const LandscapeSpec& spec) {
  const Box box = Box::cube(spec.dimension, spec.box_low, spec.box_high);
  if (spec.kind == "quadratic") {
    const auto d = static_cast<Eigen::Index>(spec.dimension);
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) a(i, k) = spec.curvature.at(i).at(k);
    }
    return std::make_shared<QuadraticLandscape>(a, Eigen::Map<const Vector>(spec.center.data(), d), spec.offset, box);
  }
  if (spec.kind == "double_well") return std::make_shared<DoubleWellLandscape>(box);
  if (spec.kind == "spline_double_well") return std::make_shared<SplineDoubleWellLandscape>(spec.shape, box);
  throw ArgumentError("build_landscape: '" + spec.kind + "' is defined by its data model");
}

DataModelPtr build_data_model(const ExperimentConfig& config) {
  const LandscapeSpec& ls = config.landscape;
  const DataModelSpec& ms = config.data_model;
  const Box box = Box::cube(ls.dimension, ls.box_low, ls.box_high);
  if (ms.kind == "location") return std::make_shared<LocationModel>(ls.dimension, ms.amplitude, box);
  if (ms.kind == "rls") {
    const Vector w0 = Eigen::Map<const Vector>(ms.truth.data(), static_cast<Eigen::Index>(ms.truth.size()));
    return std::make_shared<RlsModel>(w0, ms.noise, box);
  }
  return std::make_shared<MultiplicativeNoiseModel>(build_landscape(ls), ms.amplitude);
}

std::string series_axis(const GibbsSweep& sweep) {
  if (sweep.gamma.size() > 1) return "gamma";
  if (sweep.lambda.size() > 1) return "lambda";
  if (sweep.m.size() > 1) return "m";
  if (sweep.radius.size() > 1) return "radius";
  return "gamma";
}

namespace {

constexpr std::size_t kMaxOracleDimension = 3;
constexpr double kSigmaAllowance = 3.0;

struct Point {
  std::size_t index = 0;
  double gamma = 0.0;
  double lambda = 0.0;
  double m = 0.0;
  double radius_param = 0.0;
};

std::vector<Point> sweep_points(const GibbsSweep& s) {
  std::vector<Point> points;
  for (double g : s.gamma) {
    for (double l : s.lambda) {
      for (double m : s.m) {
        for (double r : s.radius) points.push_back({points.size(), g, l, m, r});
      }
    }
  }
  return points;
}

std::string point_key(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%04zu", index);
  return buf;
}

std::string minimum_key(std::size_t point, std::size_t minimum) {
  return point_key(point) + "/min" + std::to_string(minimum);
}

void copy_terms(ReportRow& row, const BoundReport& b) {
  for (const auto& t : b.terms) row.terms.emplace_back(t.name, t.value);
  for (const auto& t : b.details) row.terms.emplace_back(t.name, t.value);
}

// pass iff margin >= -3 se
void judge(ReportRow& row, double margin, double se) {
  row.margin = margin;
  row.asserted = true;
  row.pass = margin >= -kSigmaAllowance * se;
}

class PointEvaluator {
 public:
  PointEvaluator(const ExperimentConfig& config, const DataModelPtr& model, const Point& point)
      : config_(config), model_(model), landscape_(model->landscape_ptr()), point_(point),
        seed_(chain_seed(config.master_seed, point.index)) {
    gibbs_.gamma = point.gamma;
    gibbs_.lambda = point.lambda;
    gibbs_.m = point.m;
    gibbs_.loss_bound = model->loss_bound();
    gibbs_.sigma = config.gibbs.sigma.value_or(0.5 * model->loss_bound());
    gibbs_.variant = config.gibbs.variant;
    gibbs_.validate();
    minima_ = enumerate_minima(landscape_, point.lambda);
    r0_ = disjoint_radius(minima_, landscape_->domain());
    switch (config.gibbs.radius_mode) {
      case RadiusMode::tuned:
        p_ = point.radius_param;
        radius_ = tune_radius(point.gamma, point.radius_param);
        break;
      case RadiusMode::fraction_of_r0: radius_ = point.radius_param * r0_; break;
      case RadiusMode::absolute: radius_ = point.radius_param; break;
    }
    if (!(radius_ > 0.0) || radius_ > r0_) {
      throw ConfigError({"gibbs.radius: r = " + format_number(radius_, 12) + " at point " + point_key(point.index) +
                         " must lie in (0, r0 = " + format_number(r0_, 12) + "]"});
    }
    oracle_ = landscape_->dimension() <= kMaxOracleDimension;
    quad_.nodes_per_sd = config.oracle.nodes_per_sd;
  }

  std::vector<ReportRow> run(const std::string& theorem) {
    if (theorem == "local_excess") return local_excess();
    if (theorem == "generalization") return generalization();
    if (theorem == "minima_distribution") return minima_distribution_rows();
    if (theorem == "ellipsoid_mass") return ellipsoid_mass();
    if (theorem == "complement") return complement();
    if (theorem == "global_excess") return global_excess();
    if (theorem == "pseudo_excess") return pseudo_excess();
    throw ArgumentError("unknown theorem '" + theorem + "'");
  }

 private:
  ReportRow row(const std::string& theorem, const std::string& key) const {
    ReportRow r;
    r.theorem = theorem;
    r.point = key;
    r.point_index = point_.index;
    r.gamma = point_.gamma;
    r.lambda = point_.lambda;
    r.m = point_.m;
    r.radius = radius_;
    r.p = p_;
    r.seed = seed_;
    return r;
  }

  std::vector<EllipsoidSpec> ellipsoids() const {
    std::vector<EllipsoidSpec> e;
    for (const auto& m : minima_) e.push_back(m.ellipsoid(radius_));
    return e;
  }

  // Population Gibbs measure split into the minima's ellipsoids, with E[R | cell].
  const QuadratureResult& population() {
    if (!population_) {
      const PopulationObjective f(landscape_, point_.lambda);
      const Landscape& land = *landscape_;
      population_ = quadrature_measure(f, point_.gamma, ellipsoids(),
                                       {[&land](const Vector& w) { return land.value(w); }}, quad_);
    }
    return *population_;
  }

  // Quadrature oracles are deterministic; their allowance is the accuracy the Richardson check certifies.
  double quadrature_se(double value) const { return quad_.rel_tol * std::abs(value) + quad_.abs_tol; }

  std::vector<double> ellipsoid_weights() {
    const QuadratureResult& q = population();
    std::vector<double> w(minima_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) total += q.mass[i];
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = q.mass[i] / total;
    return w;
  }

  std::vector<ReportRow> local_excess() {
    std::vector<ReportRow> rows;
    for (const auto& m : minima_) {
      const BoundReport b = local_excess_bound(m, gibbs_, radius_);
      ReportRow r = row("local_excess", minimum_key(point_.index, m.index));
      r.bound_raw = r.bound = b.total;
      copy_terms(r, b);
      if (oracle_) {
        const Estimate e =
            quadrature_local_excess(model_, m, gibbs_, radius_, config_.oracle.datasets, seed_, quad_);
        r.oracle = e.mean;
        r.oracle_se = e.standard_error;
        judge(r, b.total - e.mean, e.standard_error);
      }
      rows.push_back(std::move(r));
    }
    return rows;
  }

  std::vector<ReportRow> generalization() {
    ReportRow r = row("generalization", point_key(point_.index));
    r.bound_raw = r.bound = generalization_bound(gibbs_);
    r.terms.emplace_back("generalization", r.bound);
    GapSettings s;
    if (!config_.sampler.kind.empty()) s.kind = sampler_kind_from_string(config_.sampler.kind);
    s.steps = config_.sampler.steps;
    s.burn_in = config_.sampler.burn_in;
    s.eta = config_.sampler.eta;
    const Estimate e = empirical_generalization_gap(model_, gibbs_, config_.oracle.trials, seed_, s);
    r.oracle = e.mean;
    r.oracle_se = e.standard_error;
    judge(r, r.bound - e.mean, e.standard_error);
    return {r};
  }

  std::vector<ReportRow> minima_distribution_rows() {
    const MinimaDistribution dist = minima_distribution(minima_, gibbs_, radius_);
    std::vector<double> weights;
    if (oracle_) weights = ellipsoid_weights();
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < minima_.size(); ++i) {
      ReportRow r = row("minima_distribution", minimum_key(point_.index, minima_[i].index));
      r.bound_raw = dist.upper[i];
      r.bound = std::min(1.0, dist.upper[i]);
      r.terms.emplace_back("upper", dist.upper[i]);
      r.terms.emplace_back("limit", dist.limit[i]);
      if (oracle_) {
        r.oracle = weights[i];
        r.oracle_se = quadrature_se(weights[i]);
        judge(r, r.bound - weights[i], *r.oracle_se);
      }
      rows.push_back(std::move(r));
    }
    return rows;
  }

  std::vector<ReportRow> ellipsoid_mass() {
    std::optional<double> z;
    if (oracle_) z = population().z();
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < minima_.size(); ++i) {
      const EllipsoidMassBounds b = ellipsoid_mass_bounds(minima_[i], gibbs_, radius_, z);
      ReportRow r = row("ellipsoid_mass", minimum_key(point_.index, minima_[i].index));
      r.bound_raw = b.upper.value_or(1.0);
      r.bound = b.upper_clamped.value_or(1.0);
      if (b.upper) r.terms.emplace_back("upper", *b.upper);
      if (b.lower_with_z) r.terms.emplace_back("lower_with_z", *b.lower_with_z);
      r.terms.emplace_back("lower_free", b.lower_free);
      if (oracle_) {
        const double mass = population().mass[i];
        r.oracle = mass;
        r.oracle_se = quadrature_se(mass);
        judge(r, std::min(*b.upper - mass, mass - *b.lower_with_z), *r.oracle_se);
      }
      rows.push_back(std::move(r));
    }
    return rows;
  }

  std::vector<ReportRow> complement() {
    const ClampedValue c = complement_mass_bound(minima_, gibbs_, radius_, r0_);
    ReportRow r = row("complement", point_key(point_.index));
    r.bound_raw = c.raw;
    r.bound = c.clamped;
    r.terms.emplace_back("r0", r0_);
    if (oracle_) {
      const QuadratureResult& q = population();
      r.oracle = q.mass[q.complement_cell()];
      r.oracle_se = quadrature_se(*r.oracle);
      r.margin = c.clamped - *r.oracle;
      // A raw value outside [0, 1] makes the statement vacuous.
      if (c.raw >= 0.0 && c.raw <= 1.0) judge(r, *r.margin, *r.oracle_se);
    }
    return {r};
  }

  std::vector<ReportRow> global_excess() {
    std::optional<std::vector<double>> weights;
    if (oracle_) weights = ellipsoid_weights();
    const BoundReport b = global_excess_bound(minima_, gibbs_, radius_, r0_, weights);
    ReportRow r = row("global_excess", point_key(point_.index));
    r.bound_raw = r.bound = b.total;
    copy_terms(r, b);
    if (oracle_) {
      const QuadratureResult& q = population();
      double reference = 0.0;
      for (std::size_t i = 0; i < minima_.size(); ++i) reference += (*weights)[i] * minima_[i].risk_value;
      r.oracle = q.expectation[0] - reference;
      r.oracle_se = quadrature_se(q.expectation[0]);
      judge(r, b.total - *r.oracle, *r.oracle_se);
    }
    return {r};
  }

  std::vector<ReportRow> pseudo_excess() {
    const BoundReport b = pseudo_excess_bound(minima_, gibbs_, radius_);
    ReportRow r = row("pseudo_excess", point_key(point_.index));
    r.bound_raw = r.bound = b.total;
    copy_terms(r, b);
    if (oracle_) {
      const QuadratureResult& q = population();
      const std::vector<double> limit = minima_distribution(minima_, gibbs_, radius_).limit;
      double value = 0.0;
      for (std::size_t i = 0; i < minima_.size(); ++i) {
        if (limit[i] > 0.0) value += limit[i] * (q.conditional[i][0] - minima_[i].risk_value);
      }
      r.oracle = value;
      r.oracle_se = quadrature_se(value);
      judge(r, b.total - value, *r.oracle_se);
    }
    return {r};
  }

  const ExperimentConfig& config_;
  DataModelPtr model_;
  LandscapePtr landscape_;
  Point point_;
  std::uint64_t seed_;
  GibbsConfig gibbs_;
  std::vector<MinimumDescriptor> minima_;
  double r0_ = 0.0;
  double radius_ = 0.0;
  std::optional<double> p_;
  bool oracle_ = false;
  QuadratureSettings quad_;
  std::optional<QuadratureResult> population_;
};

fs::path output_root(const ExperimentConfig& config, const std::optional<std::string>& out) {
  if (out) return *out;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return "gibbslab-out";
}

// Claims the next unused run-NNNN directory; create_directory fails on an existing one.
fs::path fresh_run_directory(const fs::path& root) {
  fs::create_directories(root);
  for (int n = 1; n < 10000; ++n) {
    char name[16];
    std::snprintf(name, sizeof name, "run-%04d", n);
    const fs::path dir = root / name;
    if (fs::create_directory(dir)) return dir;
  }
  throw Error(ErrorCategory::configuration, "no free run directory under " + root.string());
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw Error(ErrorCategory::configuration, "cannot write " + path.string());
}

}  // namespace

std::vector<ReportRow> evaluate(const ExperimentConfig& config) {
  const DataModelPtr model = build_data_model(config);
  const std::vector<Point> points = sweep_points(config.gibbs);
  std::vector<std::string> theorems;
  for (const auto& name : theorem_names()) {
    if (std::find(config.theorems.begin(), config.theorems.end(), name) != config.theorems.end()) {
      theorems.push_back(name);
    }
  }

  std::vector<std::vector<ReportRow>> per_point(points.size());
  parallel_for(points.size(), config.workers, [&](std::size_t i) {
    PointEvaluator evaluator(config, model, points[i]);
    for (const auto& theorem : theorems) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<ReportRow> rows = evaluator.run(theorem);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : rows) r.runtime_seconds = seconds;
      per_point[i].insert(per_point[i].end(), rows.begin(), rows.end());
    }
  });
  std::vector<ReportRow> rows;
  for (auto& p : per_point) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

RunOutcome run_experiment(const ExperimentConfig& config, const std::optional<std::string>& out) {
  RunOutcome outcome;
  outcome.rows = evaluate(config);
  outcome.directory = fresh_run_directory(output_root(config, out));

  write_file(outcome.directory / "report.csv", to_csv(outcome.rows));
  nlohmann::json report = {{"config", to_json(config)}, {"rows", to_json(outcome.rows)}};
  write_file(outcome.directory / "report.json", report.dump(2) + "\n");
  const std::string axis = series_axis(config.gibbs);
  for (const auto& name : theorem_names()) {
    if (std::find(config.theorems.begin(), config.theorems.end(), name) == config.theorems.end()) continue;
    write_file(outcome.directory / ("series_" + name + ".csv"), series_csv(outcome.rows, name, axis));
  }
  for (const auto& r : outcome.rows) {
    if (r.asserted && !r.pass) outcome.exit_code = 1;
  }
  return outcome;
}

}  // namespace gibbslab
