#include "gibbslab/data_model.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/landscape.hpp"
#include "gibbslab/low_discrepancy.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace gibbslab;

namespace {

LandscapePtr double_well(std::size_t d = 1, double half = 2.5) {
  return std::make_shared<DoubleWellLandscape>(Box::cube(d, -half, half));
}

LandscapePtr unit_quadratic(std::size_t d, double half) {
  return std::make_shared<QuadraticLandscape>(Matrix::Identity(d, d), Vector::Zero(d), 0.0, Box::cube(d, -half, half));
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("double-well jets at the minimum and the barrier") {
  const auto dw = double_well();
  const RiskJet at1 = risk_jet(*dw, vec({1.0}));
  CHECK(at1.value == 0.0);
  CHECK(at1.gradient[0] == 0.0);
  CHECK(at1.hessian(0, 0) == 8.0);
  const RiskJet at0 = risk_jet(*dw, vec({0.0}));
  CHECK(at0.value == 1.0);
  CHECK(at0.gradient[0] == 0.0);
  CHECK(at0.hessian(0, 0) == -4.0);
}

TEST_CASE("quadratic jet") {
  const auto q = unit_quadratic(2, 5.0);
  const RiskJet j = risk_jet(*q, vec({3.0, 4.0}));
  CHECK(j.value == 12.5);
  CHECK(j.gradient == vec({3.0, 4.0}));
  CHECK(j.hessian == Matrix::Identity(2, 2));
  CHECK(is_symmetric(j.hessian));
}

TEST_CASE("risk_jet outside the domain") {
  CHECK_THROWS_AS(risk_jet(*double_well(), vec({2.6})), DomainError);
}

TEST_CASE("risk stays within [0, M] on the domain") {
  const std::vector<LandscapePtr> all = {
      double_well(2, 2.0), unit_quadratic(3, 4.0),
      std::make_shared<SplineDoubleWellLandscape>(SplineDoubleWellLandscape::Shape{}, Box::cube(1, -3.0, 3.0))};
  for (const auto& l : all) {
    for (const Vector& w : box_probes(l->domain(), 500, 1.0)) {
      const double v = l->value(w);
      CHECK(v >= 0.0);
      CHECK(v <= l->risk_bound() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("spline double-well joins its pieces C2") {
  const SplineDoubleWellLandscape s(SplineDoubleWellLandscape::Shape{}, Box::cube(1, -3.0, 3.0));
  for (double j : {-0.5, 0.5}) {
    const auto left = s.derivatives(std::nextafter(j, -10.0));
    const auto right = s.derivatives(std::nextafter(j, 10.0));
    CHECK(left[0] == doctest::Approx(right[0]).epsilon(1e-12));
    CHECK(left[1] == doctest::Approx(right[1]).epsilon(1e-12));
    CHECK(left[2] == doctest::Approx(right[2]).epsilon(1e-10));
  }
  CHECK(s.value(vec({-1.0})) == 0.0);
  CHECK(s.value(vec({1.0})) == 0.0);
  CHECK(s.jet(vec({-1.0})).hessian(0, 0) == 8.0);
  CHECK(s.jet(vec({1.0})).hessian(0, 0) == 2.0);
}

TEST_CASE("spline double-well rejects shapes without a single barrier") {
  SplineDoubleWellLandscape::Shape bad;
  bad.junction_left = 0.2;
  bad.junction_right = -0.2;
  CHECK_THROWS_AS(SplineDoubleWellLandscape(bad, Box::cube(1, -3.0, 3.0)), ArgumentError);
}

TEST_CASE("empirical risk jet") {
  const auto model = std::make_shared<LocationModel>(1, 1.0, Box::cube(1, -5.0, 5.0));
  const Sample one = {vec({0.0})};
  const RiskJet j = empirical_risk_jet(*model, one, vec({2.0}), 0.0);
  CHECK(j.value == 4.0);
  CHECK(j.gradient[0] == 4.0);
  CHECK(j.hessian(0, 0) == 2.0);

  const Sample s = model->draw_sample(7, 3);
  const RiskJet plain = empirical_risk_jet(*model, s, vec({0.0}), 0.0);
  const RiskJet ridged = empirical_risk_jet(*model, s, vec({0.0}), 1.0);
  CHECK(ridged.value == plain.value);
  CHECK(ridged.gradient == plain.gradient);
  CHECK(ridged.hessian(0, 0) == doctest::Approx(plain.hessian(0, 0) + 2.0));

  CHECK_THROWS_AS(empirical_risk_jet(*model, Sample{}, vec({0.0}), 0.0), ArgumentError);
}

TEST_CASE("empirical risk jet of the RLS model matches a direct re-summation") {
  const auto model = std::make_shared<RlsModel>(vec({0.3, -0.2}), 0.2, Box::cube(2, -1.0, 1.0));
  const Sample s = model->draw_sample(100, 11);
  const double lambda = 0.05;
  const auto minima = enumerate_minima(model->landscape_ptr(), lambda);
  const Vector w = minima.front().location;
  double direct = 0.0;
  for (const Vector& z : s) {
    const double resid = w.dot(z.head(2)) - z[2];
    direct += resid * resid;
  }
  direct = direct / 100.0 + lambda * w.squaredNorm();
  CHECK(std::abs(empirical_risk_jet(*model, s, w, lambda).value - direct) <= 1e-12);
}

TEST_CASE("data models are unbiased for their landscape") {
  const Box b2 = Box::cube(2, -1.0, 1.0);
  const std::vector<DataModelPtr> models = {
      std::make_shared<MultiplicativeNoiseModel>(double_well(2, 1.0), 0.7),
      std::make_shared<LocationModel>(2, 0.8, b2), std::make_shared<RlsModel>(vec({0.4, 0.1}), 0.3, b2)};
  constexpr std::size_t n = 100000;
  for (const auto& m : models) {
    const Sample s = m->draw_sample(n, 5);
    for (const Vector& w : box_probes(m->landscape().domain(), 10)) {
      double mean = 0.0;
      for (const Vector& z : s) {
        const double l = m->loss(w, z);
        CHECK(l >= 0.0);
        CHECK(l <= m->loss_bound());
        mean += l;
      }
      mean /= static_cast<double>(n);
      CHECK(std::abs(mean - m->landscape().value(w)) <= 4.0 * m->loss_bound() / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("RLS model refuses a truth that would clip labels") {
  CHECK_THROWS_AS(RlsModel(vec({0.7, 0.3}), 0.1, Box::cube(2, -1.0, 1.0)), ArgumentError);
}

TEST_CASE("double-well minima") {
  const auto m0 = enumerate_minima(double_well(), 0.0);
  REQUIRE(m0.size() == 2);
  for (const auto& m : m0) {
    CHECK(std::abs(std::abs(m.location[0]) - 1.0) <= 1e-12);
    CHECK(m.is_global);
    CHECK(m.hessian(0, 0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(m.lambda_min == doctest::Approx(8.0).epsilon(1e-12));
  }
  const auto m1 = enumerate_minima(double_well(), 0.1);
  REQUIRE(m1.size() == 2);
  for (const auto& m : m1) {
    CHECK(std::abs(m.location[0]) < 1.0);
    CHECK(std::abs(m.location[0]) == doctest::Approx(std::sqrt(0.95)).epsilon(1e-12));
    CHECK(m.is_global);
    CHECK(risk_jet(*double_well(), m.location).gradient[0] + 0.2 * m.location[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(m.regularized_hessian(0, 0) == doctest::Approx(m.hessian(0, 0) + 0.2));
  }
  CHECK(m1[0].location[0] == -m1[1].location[0]);
}

TEST_CASE("quadratic has one minimum at the center") {
  for (double lambda : {0.0, 0.3}) {
    const auto m = enumerate_minima(unit_quadratic(2, 5.0), lambda);
    REQUIRE(m.size() == 1);
    CHECK(m[0].location.norm() <= 1e-14);
    CHECK(m[0].regularized_value == 0.0);
  }
}

TEST_CASE("enumerate_minima is deterministic and flags global minima") {
  const auto spline =
      std::make_shared<SplineDoubleWellLandscape>(SplineDoubleWellLandscape::Shape{}, Box::cube(1, -3.0, 3.0));
  const auto a = enumerate_minima(spline, 0.05);
  const auto b = enumerate_minima(spline, 0.05);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].location == b[i].location);
    CHECK(a[i].regularized_value == b[i].regularized_value);
  }
  // equal depths and |centers|: under a ridge the softer (right) well ends lower
  CHECK(a[0].regularized_value < a[1].regularized_value);
  CHECK(a[0].location[0] > 0.0);
  CHECK(a[0].is_global);
  CHECK_FALSE(a[1].is_global);
}

TEST_CASE("double-well lambda >= 2 merges the wells") {
  CHECK_THROWS_AS(enumerate_minima(double_well(), 2.0), LandscapeError);
}

TEST_CASE("Lipschitz profiles") {
  const auto q = enumerate_minima(unit_quadratic(2, 5.0), 0.0);
  for (double r : {0.0, 0.5, 3.0}) CHECK(q[0].lipschitz(r) == 0.0);

  const auto dw = enumerate_minima(double_well(), 0.0);
  const auto& plus = dw[0].location[0] > 0.0 ? dw[0] : dw[1];
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(plus.lipschitz(r) == doctest::Approx(12.0 * (2.0 + r / std::sqrt(8.0))).epsilon(1e-12));
  }
  CHECK(plus.lipschitz(1e-9) == doctest::Approx(24.0).epsilon(1e-9));
  CHECK_FALSE(plus.lipschitz_underestimate);
}

TEST_CASE("Lipschitz fallback on the spline is a nonnegative flagged estimate") {
  const auto spline =
      std::make_shared<SplineDoubleWellLandscape>(SplineDoubleWellLandscape::Shape{}, Box::cube(1, -3.0, 3.0));
  const auto minima = enumerate_minima(spline, 0.0);
  for (const auto& m : minima) {
    CHECK(m.lipschitz(0.0) == 0.0);
    // inside the quadratic piece the Hessian is constant
    CHECK(m.lipschitz(0.1) == doctest::Approx(0.0).epsilon(1e-12));
    const LipschitzEstimate e = lipschitz_estimate(*spline, m, 1.5);
    CHECK(e.value >= 0.0);
    CHECK(e.underestimate);
  }
}

TEST_CASE("disjoint radius") {
  const auto dw = enumerate_minima(double_well(), 0.0);
  CHECK(disjoint_radius(dw, Box::cube(1, -2.5, 2.5)) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  const auto q = enumerate_minima(unit_quadratic(1, 5.0), 0.0);
  CHECK(disjoint_radius(q, Box::cube(1, -5.0, 5.0)) == doctest::Approx(5.0).epsilon(1e-12));

  // shrinking one curvature shrinks r0 with sqrt(lambda_min)
  auto soft = dw;
  soft[0].regularized_hessian *= 0.25;
  CHECK(disjoint_radius(soft, Box::cube(1, -2.5, 2.5)) == doctest::Approx(0.5 * std::sqrt(8.0)).epsilon(1e-12));

  auto dup = dw;
  dup[1].location = dup[0].location;
  CHECK_THROWS_AS(disjoint_radius(dup, Box::cube(1, -2.5, 2.5)), InvariantError);
}

TEST_CASE("ellipsoids of radius r0 do not overlap") {
  const auto land = double_well(2, 2.0);
  const auto minima = enumerate_minima(land, 0.1);
  const double r0 = disjoint_radius(minima, land->domain());
  for (const Vector& w : box_probes(land->domain(), 20000, 1.0)) {
    int inside = 0;
    for (const auto& m : minima) inside += m.ellipsoid(r0).contains(w) ? 1 : 0;
    CHECK(inside <= 1);
  }
}

TEST_CASE("ellipsoid membership is symmetric about the center") {
  Matrix metric(2, 2);
  metric << 3.0, 1.0, 1.0, 2.0;
  const EllipsoidSpec e{vec({0.5, -0.5}), metric, 1.0};
  for (const Vector& u : unit_ball_points(200, 2)) {
    const Vector d = 0.9 * u;
    CHECK(e.contains(e.center + d) == e.contains(e.center - d));
  }
}

TEST_CASE("Taylor sandwich inside the ellipsoid") {
  for (double lambda : {0.0, 0.2}) {
    const auto land = double_well(1);
    const auto minima = enumerate_minima(land, lambda);
    const double r0 = disjoint_radius(minima, land->domain());
    for (const auto& m : minima) {
      for (double r : {0.1 * r0, 0.5 * r0, r0}) {
        const double eps =
            m.lipschitz(r) * std::pow(r / std::sqrt(m.lambda_min + lambda), 3.0);
        for (const Vector& u : unit_ball_points(256, 1)) {
          const Vector w = m.location + u * (r / std::sqrt(m.regularized_hessian(0, 0)));
          if (!land->domain().contains(w)) continue;
          const double rl = land->value(w) + lambda * w.squaredNorm();
          const double quad = m.regularized_value + 0.5 * quadratic_form(w - m.location, m.regularized_hessian);
          CHECK(rl >= quad - eps / 6.0 - 1e-12);
          CHECK(rl <= quad + eps / 6.0 + 1e-12);
        }
      }
    }
  }
}
