#pragma once

#include "gibbslab/linalg.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gibbslab {

/// {w : (w - center)^T metric (w - center) <= radius^2}
struct EllipsoidSpec {
  Vector center;
  Matrix metric;
  double radius = 0.0;

  double metric_distance(const Vector& w) const;
  bool contains(const Vector& w) const { return metric_distance(w) <= radius; }
};

/// A population risk R on a compact experiment domain, with analytic derivatives and
/// analytic starting points for each of its isolated minima.
class Landscape {
 public:
  virtual ~Landscape() = default;

  virtual std::string name() const = 0;
  std::size_t dimension() const { return domain_.dimension(); }
  const Box& domain() const { return domain_; }
  /// M: supremum of the risk over the domain.
  double risk_bound() const { return risk_bound_; }

  /// Closed-form jet. Valid on all of R^d; callers wanting the domain check use risk_jet().
  virtual RiskJet jet(const Vector& w) const = 0;
  virtual double value(const Vector& w) const { return jet(w).value; }

  /// One starting point per minimum of R + lambda*|w|^2.
  virtual std::vector<Vector> initial_points(double lambda) const = 0;

  virtual bool has_constant_hessian() const { return false; }

  /// Closed-form L*(r) around `location` for the ellipsoid with metric `regularized_hessian`.
  virtual std::optional<double> closed_form_lipschitz(const Vector& location,
                                                      const Matrix& regularized_hessian,
                                                      double r) const;

  /// Per-coordinate junction abscissae where third derivatives jump (C^2 pieces).
  virtual std::vector<std::vector<double>> junctions() const { return {}; }

 protected:
  Landscape(Box domain, double risk_bound) : domain_(std::move(domain)), risk_bound_(risk_bound) {}
  void set_risk_bound(double m) { risk_bound_ = m; }

 private:
  Box domain_;
  double risk_bound_;
};

using LandscapePtr = std::shared_ptr<const Landscape>;

/// R(w) = 1/2 (w - c)^T A (w - c) + offset, A symmetric PSD.
class QuadraticLandscape final : public Landscape {
 public:
  QuadraticLandscape(Matrix a, Vector center, double offset, Box domain, std::string name = "quadratic");

  std::string name() const override { return name_; }
  RiskJet jet(const Vector& w) const override;
  double value(const Vector& w) const override;
  std::vector<Vector> initial_points(double lambda) const override;
  bool has_constant_hessian() const override { return true; }
  std::optional<double> closed_form_lipschitz(const Vector&, const Matrix&, double) const override {
    return 0.0;
  }

  const Matrix& curvature() const { return a_; }
  const Vector& center() const { return center_; }
  double offset() const { return offset_; }

 private:
  Matrix a_;
  Vector center_;
  double offset_;
  std::string name_;
};

/// R(w) = sum_k (w_k^2 - 1)^2; 2^d minima at the sign patterns of sqrt(1 - lambda/2).
class DoubleWellLandscape final : public Landscape {
 public:
  explicit DoubleWellLandscape(Box domain);

  std::string name() const override { return "double_well"; }
  RiskJet jet(const Vector& w) const override;
  double value(const Vector& w) const override;
  std::vector<Vector> initial_points(double lambda) const override;
  std::optional<double> closed_form_lipschitz(const Vector& location, const Matrix& regularized_hessian,
                                              double r) const override;
};

/// One-dimensional C^2 double well: quadratic wells 1/2 h_L (w - c_L)^2 and 1/2 h_R (w - c_R)^2
/// of equal depth, joined on [junction_left, junction_right] by the quintic matching value,
/// slope and curvature at both junctions.
class SplineDoubleWellLandscape final : public Landscape {
 public:
  struct Shape {
    double curvature_left = 8.0;
    double curvature_right = 2.0;
    double center_left = -1.0;
    double center_right = 1.0;
    double junction_left = -0.5;
    double junction_right = 0.5;
  };

  SplineDoubleWellLandscape(Shape shape, Box domain);

  std::string name() const override { return "spline_double_well"; }
  RiskJet jet(const Vector& w) const override;
  std::vector<Vector> initial_points(double lambda) const override;
  std::vector<std::vector<double>> junctions() const override {
    return {{shape_.junction_left, shape_.junction_right}};
  }

  const Shape& shape() const { return shape_; }
  /// value, first, second, third derivative at x.
  std::array<double, 4> derivatives(double x) const;

 private:
  Shape shape_;
  std::array<double, 6> bridge_{};  // ascending power coefficients on the bridge
};

/// Curvature information at one isolated minimum of R_lambda.
struct MinimumDescriptor {
  std::size_t index = 0;
  Vector location;
  double lambda = 0.0;
  double risk_value = 0.0;         ///< R(w*)
  double regularized_value = 0.0;  ///< R_lambda(w*)
  Matrix hessian;                  ///< Hessian of R at w*
  Matrix regularized_hessian;      ///< hessian + 2 lambda I
  double lambda_min = 0.0;         ///< smallest nonzero eigenvalue of `hessian`
  double log_det_regularized = 0.0;
  bool is_global = false;
  /// L*(r); nonnegative, nondecreasing.
  std::function<double(double)> lipschitz;
  /// True when `lipschitz` is a point-set estimate rather than a closed form.
  bool lipschitz_underestimate = false;

  EllipsoidSpec ellipsoid(double r) const { return {location, regularized_hessian, r}; }
};

struct LipschitzEstimate {
  double value = 0.0;
  bool underestimate = false;
};

/// Number of points in the ellipsoid used by the L*(r) fallback.
inline constexpr std::size_t kLipschitzPointCount = 4096;

/// (R, grad R, hess R) at w; DomainError outside the landscape's domain.
RiskJet risk_jet(const Landscape& landscape, const Vector& w);

/// Newton-polished minima of R_lambda from the landscape's initial points, sorted by
/// R_lambda then index. LandscapeError when a minimum is not isolated.
std::vector<MinimumDescriptor> enumerate_minima(const LandscapePtr& landscape, double lambda);

/// L*(r) around `location`: closed form when the landscape provides one, otherwise the
/// maximum Hessian-difference ratio over kLipschitzPointCount points of the ellipsoid.
LipschitzEstimate lipschitz_estimate(const Landscape& landscape, const Vector& location,
                                     const Matrix& regularized_hessian, double r);
LipschitzEstimate lipschitz_estimate(const Landscape& landscape, const MinimumDescriptor& minimum, double r);

/// Conservative radius keeping all curvature ellipsoids pairwise disjoint. For a single
/// minimum, the radius at which its ellipsoid touches the domain boundary.
double disjoint_radius(const std::vector<MinimumDescriptor>& minima, const Box& domain);

/// Landscape registry used by the harness.
std::vector<std::string> landscape_names();

}  // namespace gibbslab
