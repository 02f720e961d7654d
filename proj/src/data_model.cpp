#include "gibbslab/data_model.hpp"

#include "gibbslab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gibbslab {

Sample DataModel::draw_sample(std::size_t m, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Sample out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(draw_example(rng));
  return out;
}

// ----------------------------------------------------------- multiplicative

MultiplicativeNoiseModel::MultiplicativeNoiseModel(LandscapePtr landscape, double amplitude)
    : DataModel(landscape, (1.0 + amplitude) * landscape->risk_bound()), amplitude_(amplitude) {
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw ArgumentError("multiplicative model: amplitude must lie in [0, 1]");
  }
}

RiskJet MultiplicativeNoiseModel::loss_jet(const Vector& w, const Vector& z) const {
  RiskJet j = landscape().jet(w);
  const double f = 1.0 + z[0];
  j.value *= f;
  j.gradient *= f;
  j.hessian *= f;
  return j;
}

double MultiplicativeNoiseModel::loss(const Vector& w, const Vector& z) const {
  return landscape().value(w) * (1.0 + z[0]);
}

Vector MultiplicativeNoiseModel::draw_example(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-amplitude_, amplitude_);
  return Vector::Constant(1, amplitude_ > 0.0 ? u(rng) : 0.0);
}

// ----------------------------------------------------------------- location

namespace {

LandscapePtr location_landscape(std::size_t dim, double a, Box domain) {
  const auto d = static_cast<Eigen::Index>(dim);
  return std::make_shared<QuadraticLandscape>(2.0 * Matrix::Identity(d, d), Vector::Zero(d),
                                              static_cast<double>(dim) * a * a / 3.0, std::move(domain),
                                              "location");
}

double location_bound(const Box& box, double a) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < box.lower.size(); ++k) {
    const double reach = std::max(std::abs(box.lower[k]), std::abs(box.upper[k])) + a;
    m += reach * reach;
  }
  return m;
}

}  // namespace

LocationModel::LocationModel(std::size_t dim, double amplitude, Box domain)
    : DataModel(location_landscape(dim, amplitude, domain), location_bound(domain, amplitude)),
      amplitude_(amplitude) {
  if (!(amplitude >= 0.0)) throw ArgumentError("location model: amplitude must be nonnegative");
  if (domain.dimension() != dim) throw ArgumentError("location model: domain dimension differs");
}

RiskJet LocationModel::loss_jet(const Vector& w, const Vector& z) const {
  const Vector x = w - z;
  const auto d = w.size();
  return {x.squaredNorm(), 2.0 * x, 2.0 * Matrix::Identity(d, d)};
}

double LocationModel::loss(const Vector& w, const Vector& z) const { return (w - z).squaredNorm(); }

Vector LocationModel::draw_example(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-amplitude_, amplitude_);
  Vector z(static_cast<Eigen::Index>(dimension()));
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = amplitude_ > 0.0 ? u(rng) : 0.0;
  return z;
}

// ---------------------------------------------------------------------- rls

namespace {

LandscapePtr rls_landscape(const Vector& w0, double s, Box domain) {
  const auto d = w0.size();
  return std::make_shared<QuadraticLandscape>((2.0 / 3.0) * Matrix::Identity(d, d), w0, s * s / 3.0,
                                              std::move(domain), "rls");
}

double rls_bound(const Box& box) {
  double reach = 1.0;
  for (Eigen::Index k = 0; k < box.lower.size(); ++k) {
    reach += std::max(std::abs(box.lower[k]), std::abs(box.upper[k]));
  }
  return reach * reach;
}

}  // namespace

RlsModel::RlsModel(Vector w0, double noise, Box domain)
    : DataModel(rls_landscape(w0, noise, domain), rls_bound(domain)), w0_(std::move(w0)), noise_(noise) {
  if (!(noise >= 0.0)) throw ArgumentError("rls model: noise must be nonnegative");
  if (static_cast<std::size_t>(w0_.size()) != domain.dimension()) {
    throw ArgumentError("rls model: truth and domain dimensions differ");
  }
  if (w0_.lpNorm<1>() + noise_ > 1.0) {
    throw ArgumentError("rls model: |w0|_1 + noise must not exceed 1 (label clipping would bias the risk)");
  }
}

RiskJet RlsModel::loss_jet(const Vector& w, const Vector& z) const {
  const auto d = w.size();
  const auto x = z.head(d);
  const double resid = w.dot(x) - z[d];
  return {resid * resid, 2.0 * resid * x, 2.0 * x * x.transpose()};
}

double RlsModel::loss(const Vector& w, const Vector& z) const {
  const double resid = w.dot(z.head(w.size())) - z[w.size()];
  return resid * resid;
}

Vector RlsModel::draw_example(std::mt19937_64& rng) const {
  const auto d = w0_.size();
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector z(d + 1);
  for (Eigen::Index k = 0; k < d; ++k) z[k] = unit(rng);
  const double xi = noise_ > 0.0 ? noise_ * unit(rng) : 0.0;
  z[d] = std::clamp(w0_.dot(z.head(d)) + xi, -1.0, 1.0);
  return z;
}

// ---------------------------------------------------------------- empirical

RiskJet empirical_risk_jet(const DataModel& model, const Sample& sample, const Vector& w, double lambda) {
  if (sample.empty()) throw ArgumentError("empirical_risk_jet: empty sample");
  if (static_cast<std::size_t>(w.size()) != model.dimension() || !model.landscape().domain().contains(w)) {
    throw DomainError("empirical_risk_jet: point outside the domain");
  }
  const auto d = w.size();
  RiskJet out{0.0, Vector::Zero(d), Matrix::Zero(d, d)};
  for (const Vector& z : sample) {
    const RiskJet j = model.loss_jet(w, z);
    out.value += j.value;
    out.gradient += j.gradient;
    out.hessian += j.hessian;
  }
  const double inv_m = 1.0 / static_cast<double>(sample.size());
  out.value = out.value * inv_m + lambda * w.squaredNorm();
  out.gradient = out.gradient * inv_m + 2.0 * lambda * w;
  out.hessian = out.hessian * inv_m + 2.0 * lambda * Matrix::Identity(d, d);
  return out;
}

std::vector<std::string> data_model_names() { return {"multiplicative", "location", "rls"}; }

}  // namespace gibbslab
