#pragma once

#include "gibbslab/landscape.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace gibbslab {

using Sample = std::vector<Vector>;

/// Loss l(w, z) with examples z ~ D such that E_z l(w, z) = R(w) for the attached landscape.
class DataModel {
 public:
  virtual ~DataModel() = default;

  virtual std::string name() const = 0;
  const Landscape& landscape() const { return *landscape_; }
  const LandscapePtr& landscape_ptr() const { return landscape_; }
  std::size_t dimension() const { return landscape_->dimension(); }

  /// M: supremum of the loss over the domain and the example space.
  double loss_bound() const { return loss_bound_; }

  virtual RiskJet loss_jet(const Vector& w, const Vector& z) const = 0;
  virtual double loss(const Vector& w, const Vector& z) const { return loss_jet(w, z).value; }
  virtual Vector draw_example(std::mt19937_64& rng) const = 0;

  /// True when the loss Hessian does not depend on w.
  virtual bool has_constant_hessian() const { return landscape_->has_constant_hessian(); }

  /// m i.i.d. examples from a generator seeded with `seed`.
  Sample draw_sample(std::size_t m, std::uint64_t seed) const;

 protected:
  DataModel(LandscapePtr landscape, double loss_bound)
      : landscape_(std::move(landscape)), loss_bound_(loss_bound) {}

 private:
  LandscapePtr landscape_;
  double loss_bound_;
};

using DataModelPtr = std::shared_ptr<const DataModel>;

/// l(w, z) = R(w)(1 + z), z ~ U[-a, a]. a = 0 gives a deterministic loss.
class MultiplicativeNoiseModel final : public DataModel {
 public:
  MultiplicativeNoiseModel(LandscapePtr landscape, double amplitude);
  std::string name() const override { return "multiplicative"; }
  RiskJet loss_jet(const Vector& w, const Vector& z) const override;
  double loss(const Vector& w, const Vector& z) const override;
  Vector draw_example(std::mt19937_64& rng) const override;
  double amplitude() const { return amplitude_; }

 private:
  double amplitude_;
};

/// l(w, z) = |w - z|^2, z ~ U[-a, a]^d; R(w) = |w|^2 + d a^2 / 3.
class LocationModel final : public DataModel {
 public:
  LocationModel(std::size_t dim, double amplitude, Box domain);
  std::string name() const override { return "location"; }
  RiskJet loss_jet(const Vector& w, const Vector& z) const override;
  double loss(const Vector& w, const Vector& z) const override;
  Vector draw_example(std::mt19937_64& rng) const override;

 private:
  double amplitude_;
};

/// Regularized least squares: x ~ U[-1,1]^d, y = clip(w0.x + xi, -1, 1), xi ~ U[-s, s],
/// l(w, (x, y)) = (w.x - y)^2. Requires |w0|_1 + s <= 1 so the clip never binds, giving
/// R(w) = |w - w0|^2 / 3 + s^2 / 3.
class RlsModel final : public DataModel {
 public:
  RlsModel(Vector w0, double noise, Box domain);
  std::string name() const override { return "rls"; }
  RiskJet loss_jet(const Vector& w, const Vector& z) const override;
  double loss(const Vector& w, const Vector& z) const override;
  Vector draw_example(std::mt19937_64& rng) const override;
  const Vector& truth() const { return w0_; }
  double noise() const { return noise_; }

 private:
  Vector w0_;
  double noise_;
};

/// Jet of (1/m) sum_i l(w, z_i) + lambda |w|^2. ArgumentError on an empty sample,
/// DomainError outside the domain.
RiskJet empirical_risk_jet(const DataModel& model, const Sample& sample, const Vector& w, double lambda);

std::vector<std::string> data_model_names();

}  // namespace gibbslab
