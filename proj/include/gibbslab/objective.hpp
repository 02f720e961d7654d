#pragma once

#include "gibbslab/data_model.hpp"
#include "gibbslab/landscape.hpp"

#include <memory>
#include <optional>

namespace gibbslab {

/// A regularized risk F(w) on a box: the exponent of a Gibbs density e^{-gamma F}.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual const Box& domain() const = 0;
  std::size_t dimension() const { return domain().dimension(); }
  virtual double value(const Vector& w) const = 0;
  /// Jet without a domain check.
  virtual RiskJet jet(const Vector& w) const = 0;
  virtual bool has_constant_hessian() const = 0;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// R_lambda(w) = R(w) + lambda |w|^2.
class PopulationObjective final : public Objective {
 public:
  PopulationObjective(LandscapePtr landscape, double lambda);
  const Box& domain() const override { return landscape_->domain(); }
  double value(const Vector& w) const override;
  RiskJet jet(const Vector& w) const override;
  bool has_constant_hessian() const override { return landscape_->has_constant_hessian(); }
  const Landscape& landscape() const { return *landscape_; }
  double lambda() const { return lambda_; }

 private:
  LandscapePtr landscape_;
  double lambda_;
};

/// R_hat_{S,lambda}(w) = (1/m) sum_i l(w, z_i) + lambda |w|^2. Constant-Hessian models are
/// collapsed to their exact quadratic expansion at the origin.
class EmpiricalObjective final : public Objective {
 public:
  EmpiricalObjective(DataModelPtr model, Sample sample, double lambda);
  const Box& domain() const override { return model_->landscape().domain(); }
  double value(const Vector& w) const override;
  RiskJet jet(const Vector& w) const override;
  bool has_constant_hessian() const override { return model_->has_constant_hessian(); }

  /// R_hat_S(w), without the ridge term.
  double unregularized(const Vector& w) const;
  const DataModel& model() const { return *model_; }
  const Sample& sample() const { return sample_; }
  double lambda() const { return lambda_; }

 private:
  RiskJet raw_jet(const Vector& w) const;

  DataModelPtr model_;
  Sample sample_;
  double lambda_;
  std::optional<RiskJet> expansion_;  // unregularized jet at 0 when the Hessian is constant
};

}  // namespace gibbslab
