#include "gibbslab/objective.hpp"

#include "gibbslab/errors.hpp"

namespace gibbslab {

PopulationObjective::PopulationObjective(LandscapePtr landscape, double lambda)
    : landscape_(std::move(landscape)), lambda_(lambda) {
  if (!landscape_) throw ArgumentError("population objective: null landscape");
  if (!(lambda >= 0.0)) throw ArgumentError("population objective: lambda must be nonnegative");
}

double PopulationObjective::value(const Vector& w) const {
  return landscape_->value(w) + lambda_ * w.squaredNorm();
}

RiskJet PopulationObjective::jet(const Vector& w) const {
  RiskJet j = landscape_->jet(w);
  j.value += lambda_ * w.squaredNorm();
  j.gradient += 2.0 * lambda_ * w;
  j.hessian.diagonal().array() += 2.0 * lambda_;
  return j;
}

EmpiricalObjective::EmpiricalObjective(DataModelPtr model, Sample sample, double lambda)
    : model_(std::move(model)), sample_(std::move(sample)), lambda_(lambda) {
  if (!model_) throw ArgumentError("empirical objective: null data model");
  if (sample_.empty()) throw ArgumentError("empirical objective: empty sample");
  if (!(lambda >= 0.0)) throw ArgumentError("empirical objective: lambda must be nonnegative");
  if (model_->has_constant_hessian()) expansion_ = raw_jet(Vector::Zero(static_cast<Eigen::Index>(dimension())));
}

RiskJet EmpiricalObjective::raw_jet(const Vector& w) const {
  if (expansion_) {
    const Vector hw = expansion_->hessian * w;
    return {expansion_->value + expansion_->gradient.dot(w) + 0.5 * w.dot(hw), expansion_->gradient + hw,
            expansion_->hessian};
  }
  const auto d = w.size();
  RiskJet out{0.0, Vector::Zero(d), Matrix::Zero(d, d)};
  for (const Vector& z : sample_) {
    const RiskJet j = model_->loss_jet(w, z);
    out.value += j.value;
    out.gradient += j.gradient;
    out.hessian += j.hessian;
  }
  const double inv_m = 1.0 / static_cast<double>(sample_.size());
  out.value *= inv_m;
  out.gradient *= inv_m;
  out.hessian *= inv_m;
  return out;
}

double EmpiricalObjective::unregularized(const Vector& w) const {
  if (expansion_) return expansion_->value + expansion_->gradient.dot(w) + 0.5 * quadratic_form(w, expansion_->hessian);
  double sum = 0.0;
  for (const Vector& z : sample_) sum += model_->loss(w, z);
  return sum / static_cast<double>(sample_.size());
}

double EmpiricalObjective::value(const Vector& w) const { return unregularized(w) + lambda_ * w.squaredNorm(); }

RiskJet EmpiricalObjective::jet(const Vector& w) const {
  RiskJet j = raw_jet(w);
  j.value += lambda_ * w.squaredNorm();
  j.gradient += 2.0 * lambda_ * w;
  j.hessian.diagonal().array() += 2.0 * lambda_;
  return j;
}

}  // namespace gibbslab
