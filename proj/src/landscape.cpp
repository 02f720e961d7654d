#include "gibbslab/landscape.hpp"

#include "gibbslab/errors.hpp"
#include "gibbslab/low_discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gibbslab {

double EllipsoidSpec::metric_distance(const Vector& w) const {
  const Vector x = w - center;
  return std::sqrt(std::max(0.0, quadratic_form(x, metric)));
}

std::optional<double> Landscape::closed_form_lipschitz(const Vector&, const Matrix&, double) const {
  return std::nullopt;
}

// ---------------------------------------------------------------- quadratic

namespace {

double max_over_vertices(const Box& box, const std::function<double(const Vector&)>& f) {
  const std::size_t d = box.dimension();
  if (d > 20) throw ArgumentError("vertex enumeration limited to d <= 20");
  double best = -std::numeric_limits<double>::infinity();
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    for (std::size_t k = 0; k < d; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      v[i] = (mask >> k) & 1U ? box.upper[i] : box.lower[i];
    }
    best = std::max(best, f(v));
  }
  return best;
}

}  // namespace

QuadraticLandscape::QuadraticLandscape(Matrix a, Vector center, double offset, Box domain, std::string name)
    : Landscape(std::move(domain), 0.0),
      a_(std::move(a)),
      center_(std::move(center)),
      offset_(offset),
      name_(std::move(name)) {
  const auto d = static_cast<Eigen::Index>(dimension());
  if (a_.rows() != d || a_.cols() != d || center_.size() != d) {
    throw ArgumentError("quadratic landscape: curvature, center and domain dimensions differ");
  }
  if (!is_positive_semidefinite(a_)) throw ArgumentError("quadratic landscape: curvature must be symmetric PSD");
  if (offset_ < 0.0) throw ArgumentError("quadratic landscape: offset must be nonnegative");
  // Convex, so the supremum over the box sits at a vertex.
  set_risk_bound(max_over_vertices(this->domain(), [this](const Vector& v) { return value(v); }));
}

double QuadraticLandscape::value(const Vector& w) const {
  return 0.5 * quadratic_form(w - center_, a_) + offset_;
}

RiskJet QuadraticLandscape::jet(const Vector& w) const {
  const Vector x = w - center_;
  const Vector ax = a_ * x;
  return {0.5 * x.dot(ax) + offset_, ax, a_};
}

std::vector<Vector> QuadraticLandscape::initial_points(double lambda) const {
  const auto d = static_cast<Eigen::Index>(dimension());
  const Matrix h = a_ + 2.0 * lambda * Matrix::Identity(d, d);
  Eigen::LDLT<Matrix> ldlt(h);
  if (ldlt.info() != Eigen::Success || !is_positive_definite(h)) {
    throw LandscapeError("quadratic landscape: A + 2 lambda I is singular, minimum not isolated");
  }
  return {ldlt.solve(a_ * center_)};
}

// -------------------------------------------------------------- double well

namespace {

double quartic_max_on(double lo, double hi) {
  auto f = [](double x) { return (x * x - 1.0) * (x * x - 1.0); };
  double best = std::max(f(lo), f(hi));
  if (lo < 0.0 && hi > 0.0) best = std::max(best, f(0.0));
  return best;
}

}  // namespace

DoubleWellLandscape::DoubleWellLandscape(Box domain) : Landscape(std::move(domain), 0.0) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < this->domain().lower.size(); ++k) {
    m += quartic_max_on(this->domain().lower[k], this->domain().upper[k]);
  }
  set_risk_bound(m);
}

double DoubleWellLandscape::value(const Vector& w) const {
  return (w.array().square() - 1.0).square().sum();
}

RiskJet DoubleWellLandscape::jet(const Vector& w) const {
  const Eigen::ArrayXd sq = w.array().square();
  RiskJet out;
  out.value = (sq - 1.0).square().sum();
  out.gradient = (4.0 * w.array() * (sq - 1.0)).matrix();
  out.hessian = (12.0 * sq - 4.0).matrix().asDiagonal();
  return out;
}

std::vector<Vector> DoubleWellLandscape::initial_points(double lambda) const {
  if (lambda >= 2.0) throw LandscapeError("double well: lambda >= 2 merges the wells");
  const double s = std::sqrt(1.0 - 0.5 * lambda);
  const std::size_t d = dimension();
  if (d > 16) throw ArgumentError("double well: 2^d minima enumerated only for d <= 16");
  std::vector<Vector> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Vector p(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) p[static_cast<Eigen::Index>(k)] = (mask >> k) & 1U ? -s : s;
    out.push_back(std::move(p));
  }
  return out;
}

// |12 (w_k^2 - w*_k^2)| <= 12 |w_k - w*_k| (2 |w*_k| + |w_k - w*_k|), and on the ellipsoid
// |w - w*| <= r / sqrt(lambda_min(H_lambda)).
std::optional<double> DoubleWellLandscape::closed_form_lipschitz(const Vector& location,
                                                                 const Matrix& regularized_hessian,
                                                                 double r) const {
  const double lmin = symmetric_eigenvalues(regularized_hessian).minCoeff();
  return 12.0 * (2.0 * location.cwiseAbs().maxCoeff() + r / std::sqrt(lmin));
}

// ------------------------------------------------------------ spline double well

SplineDoubleWellLandscape::SplineDoubleWellLandscape(Shape shape, Box domain)
    : Landscape(std::move(domain), 0.0), shape_(shape) {
  const Shape& s = shape_;
  if (dimension() != 1) throw ArgumentError("spline double well is one-dimensional");
  if (!(s.curvature_left > 0.0 && s.curvature_right > 0.0)) {
    throw ArgumentError("spline double well: curvatures must be positive");
  }
  if (!(s.center_left < s.junction_left && s.junction_left < s.junction_right && s.junction_right < s.center_right)) {
    throw ArgumentError("spline double well: need center_left < junction_left < junction_right < center_right");
  }
  const double lo = this->domain().lower[0];
  const double hi = this->domain().upper[0];
  if (!(lo < s.center_left && s.center_right < hi)) {
    throw ArgumentError("spline double well: both wells must lie inside the domain");
  }

  // Quintic in u = x - junction_left matching the wells' 2-jets at both ends.
  const double width = s.junction_right - s.junction_left;
  const double ya = 0.5 * s.curvature_left * std::pow(s.junction_left - s.center_left, 2);
  const double da = s.curvature_left * (s.junction_left - s.center_left);
  const double yb = 0.5 * s.curvature_right * std::pow(s.junction_right - s.center_right, 2);
  const double db = s.curvature_right * (s.junction_right - s.center_right);
  Eigen::Matrix<double, 6, 6> system = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs;
  system(0, 0) = 1.0;
  system(1, 1) = 1.0;
  system(2, 2) = 2.0;
  for (int k = 0; k < 6; ++k) {
    system(3, k) = std::pow(width, k);
    if (k >= 1) system(4, k) = k * std::pow(width, k - 1);
    if (k >= 2) system(5, k) = k * (k - 1) * std::pow(width, k - 2);
  }
  rhs << ya, da, s.curvature_left, yb, db, s.curvature_right;
  const Eigen::Matrix<double, 6, 1> coef = system.fullPivLu().solve(rhs);
  for (int k = 0; k < 6; ++k) bridge_[static_cast<std::size_t>(k)] = coef[k];

  // The bridge must rise from the left well and fall into the right one with a single peak;
  // an interior bridge minimum would be an unregistered minimum.
  constexpr int kScan = 4000;
  int sign_changes = 0;
  double peak = -std::numeric_limits<double>::infinity();
  double prev = derivatives(s.junction_left)[1];
  for (int j = 1; j <= kScan; ++j) {
    const double x = s.junction_left + width * j / kScan;
    const auto dv = derivatives(x);
    if ((dv[1] < 0.0) != (prev < 0.0)) {
      ++sign_changes;
      double a = x - width / kScan;
      double b = x;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        if ((derivatives(mid)[1] < 0.0) == (prev < 0.0)) a = mid; else b = mid;
      }
      if (0.5 * (a + b) >= lo && 0.5 * (a + b) <= hi) peak = std::max(peak, derivatives(0.5 * (a + b))[0]);
    }
    prev = dv[1];
  }
  if (sign_changes != 1) throw ArgumentError("spline double well: bridge is not a single barrier");
  if (derivatives(s.junction_left)[0] < 0.0 || derivatives(s.junction_right)[0] < 0.0) {
    throw ArgumentError("spline double well: negative bridge values");
  }

  double m = std::max({derivatives(lo)[0], derivatives(hi)[0], peak});
  for (double x : {s.junction_left, s.junction_right}) {
    if (x >= lo && x <= hi) m = std::max(m, derivatives(x)[0]);
  }
  set_risk_bound(m);
}

std::array<double, 4> SplineDoubleWellLandscape::derivatives(double x) const {
  const Shape& s = shape_;
  if (x <= s.junction_left) {
    const double u = x - s.center_left;
    return {0.5 * s.curvature_left * u * u, s.curvature_left * u, s.curvature_left, 0.0};
  }
  if (x >= s.junction_right) {
    const double u = x - s.center_right;
    return {0.5 * s.curvature_right * u * u, s.curvature_right * u, s.curvature_right, 0.0};
  }
  const double u = x - s.junction_left;
  const auto& c = bridge_;
  const double v = c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * (c[4] + u * c[5]))));
  const double d1 = c[1] + u * (2 * c[2] + u * (3 * c[3] + u * (4 * c[4] + u * 5 * c[5])));
  const double d2 = 2 * c[2] + u * (6 * c[3] + u * (12 * c[4] + u * 20 * c[5]));
  const double d3 = 6 * c[3] + u * (24 * c[4] + u * 60 * c[5]);
  return {v, d1, d2, d3};
}

RiskJet SplineDoubleWellLandscape::jet(const Vector& w) const {
  const auto dv = derivatives(w[0]);
  RiskJet out;
  out.value = dv[0];
  out.gradient = Vector::Constant(1, dv[1]);
  out.hessian = Matrix::Constant(1, 1, dv[2]);
  return out;
}

std::vector<Vector> SplineDoubleWellLandscape::initial_points(double lambda) const {
  const Shape& s = shape_;
  auto pulled = [lambda](double h, double c) { return Vector::Constant(1, h * c / (h + 2.0 * lambda)); };
  return {pulled(s.curvature_left, s.center_left), pulled(s.curvature_right, s.center_right)};
}

// ---------------------------------------------------------------- operations

RiskJet risk_jet(const Landscape& landscape, const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != landscape.dimension() || !landscape.domain().contains(w)) {
    throw DomainError("risk_jet: point outside the domain of landscape '" + landscape.name() + "'");
  }
  return landscape.jet(w);
}

namespace {

constexpr double kGradientTolerance = 1e-10;
constexpr double kGlobalTolerance = 1e-9;
constexpr int kNewtonIterations = 100;

Vector polish(const Landscape& landscape, Vector x, double lambda) {
  const auto d = static_cast<Eigen::Index>(landscape.dimension());
  const Matrix ridge = 2.0 * lambda * Matrix::Identity(d, d);
  for (int it = 0; it <= kNewtonIterations; ++it) {
    const RiskJet j = landscape.jet(x);
    const Vector g = j.gradient + 2.0 * lambda * x;
    if (g.norm() <= kGradientTolerance) return x;
    const Matrix h = j.hessian + ridge;
    if (!is_positive_definite(h)) throw LandscapeError("Newton polish met an indefinite Hessian");
    x -= h.ldlt().solve(g);
    if (!x.allFinite()) throw LandscapeError("Newton polish diverged");
  }
  throw LandscapeError("Newton polish did not reach the gradient tolerance");
}

}  // namespace

std::vector<MinimumDescriptor> enumerate_minima(const LandscapePtr& landscape, double lambda) {
  if (!landscape) throw ArgumentError("enumerate_minima: null landscape");
  if (!(lambda >= 0.0)) throw ArgumentError("enumerate_minima: lambda must be nonnegative");
  const Landscape& ls = *landscape;
  const auto d = static_cast<Eigen::Index>(ls.dimension());

  std::vector<MinimumDescriptor> out;
  const auto starts = ls.initial_points(lambda);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    MinimumDescriptor m;
    m.index = i;
    m.lambda = lambda;
    m.location = polish(ls, starts[i], lambda);
    if (!ls.domain().contains(m.location)) {
      throw LandscapeError("minimum " + std::to_string(i) + " of '" + ls.name() + "' lies outside the domain");
    }
    const RiskJet j = ls.jet(m.location);
    m.risk_value = j.value;
    m.regularized_value = j.value + lambda * m.location.squaredNorm();
    m.hessian = 0.5 * (j.hessian + j.hessian.transpose());
    m.regularized_hessian = m.hessian + 2.0 * lambda * Matrix::Identity(d, d);
    if (!is_positive_semidefinite(m.hessian) || !is_positive_definite(m.regularized_hessian)) {
      throw LandscapeError("minimum " + std::to_string(i) + " of '" + ls.name() + "' is not isolated");
    }
    m.lambda_min = smallest_nonzero_eigenvalue(m.hessian);
    m.log_det_regularized = log_det_spd(m.regularized_hessian);
    m.lipschitz_underestimate = !ls.closed_form_lipschitz(m.location, m.regularized_hessian, 1.0).has_value();
    m.lipschitz = [landscape, loc = m.location, h = m.regularized_hessian](double r) {
      return lipschitz_estimate(*landscape, loc, h, r).value;
    };
    for (const auto& prev : out) {
      if ((prev.location - m.location).norm() <= 1e-8 * (1.0 + m.location.norm())) {
        throw LandscapeError("initial points " + std::to_string(prev.index) + " and " + std::to_string(i) +
                             " converge to the same minimum");
      }
    }
    out.push_back(std::move(m));
  }
  if (out.empty()) throw LandscapeError("landscape '" + ls.name() + "' registers no minima");

  std::stable_sort(out.begin(), out.end(), [](const MinimumDescriptor& a, const MinimumDescriptor& b) {
    if (a.regularized_value != b.regularized_value) return a.regularized_value < b.regularized_value;
    return a.index < b.index;
  });
  const double best = out.front().regularized_value;
  for (auto& m : out) m.is_global = m.regularized_value <= best + kGlobalTolerance;
  return out;
}

LipschitzEstimate lipschitz_estimate(const Landscape& landscape, const Vector& location,
                                     const Matrix& regularized_hessian, double r) {
  if (!(r >= 0.0)) throw ArgumentError("lipschitz_estimate: r must be nonnegative");
  if (r == 0.0) return {0.0, !landscape.closed_form_lipschitz(location, regularized_hessian, 0.0).has_value()};
  if (auto closed = landscape.closed_form_lipschitz(location, regularized_hessian, r)) return {*closed, false};

  // Map the unit ball onto {x : x^T H x <= r^2} through r H^{-1/2}.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(regularized_hessian);
  const Matrix transform = r * eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           eig.eigenvectors().transpose();
  const Matrix h0 = landscape.jet(location).hessian;
  double best = 0.0;
  for (const Vector& u : unit_ball_points(kLipschitzPointCount, landscape.dimension())) {
    const Vector step = transform * u;
    const double dist = step.norm();
    if (dist == 0.0) continue;
    const Matrix diff = h0 - landscape.jet(location + step).hessian;
    const double spectral = symmetric_eigenvalues(0.5 * (diff + diff.transpose())).cwiseAbs().maxCoeff();
    best = std::max(best, spectral / dist);
  }
  return {best, true};
}

LipschitzEstimate lipschitz_estimate(const Landscape& landscape, const MinimumDescriptor& minimum, double r) {
  return lipschitz_estimate(landscape, minimum.location, minimum.regularized_hessian, r);
}

double disjoint_radius(const std::vector<MinimumDescriptor>& minima, const Box& domain) {
  if (minima.empty()) throw ArgumentError("disjoint_radius: no minima");
  for (const auto& m : minima) {
    if (!is_positive_definite(m.regularized_hessian)) {
      throw ArgumentError("disjoint_radius: regularized Hessian not positive definite");
    }
  }
  if (minima.size() == 1) {
    const MinimumDescriptor& m = minima.front();
    const Matrix inv = m.regularized_hessian.inverse();
    double r0 = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m.location.size(); ++k) {
      const double room = std::min(m.location[k] - domain.lower[k], domain.upper[k] - m.location[k]);
      r0 = std::min(r0, room / std::sqrt(inv(k, k)));
    }
    return std::max(0.0, r0);
  }
  double min_dist = std::numeric_limits<double>::infinity();
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < minima.size(); ++i) {
    min_eig = std::min(min_eig, symmetric_eigenvalues(minima[i].regularized_hessian).minCoeff());
    for (std::size_t j = i + 1; j < minima.size(); ++j) {
      const double dist = (minima[i].location - minima[j].location).norm();
      if (dist == 0.0) throw InvariantError("disjoint_radius: duplicate minimum locations");
      min_dist = std::min(min_dist, dist);
    }
  }
  return 0.5 * min_dist * std::sqrt(min_eig);
}

std::vector<std::string> landscape_names() { return {"quadratic", "double_well", "spline_double_well"}; }

}  // namespace gibbslab
