#include "gibbslab/quadrature.hpp"

#include "gibbslab/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gibbslab {

namespace {

using Rule = boost::math::quadrature::gauss<double, 10>;
constexpr double kRuleOrder = 10.0;
constexpr std::size_t kMaxDimension = 3;

// Composite Gauss-Legendre on [a, b]. With `sine`, x = mid + half sin(theta) removes
// square-root behaviour at both ends.
void append_rule(double a, double b, std::size_t panels, bool sine, std::vector<double>& xs,
                 std::vector<double>& ws) {
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  const double lo = sine ? -0.5 * std::numbers::pi : a;
  const double hi = sine ? 0.5 * std::numbers::pi : b;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double width = (hi - lo) / static_cast<double>(panels);
  auto push = [&](double t, double w) {
    if (sine) {
      xs.push_back(mid + half * std::sin(t));
      ws.push_back(w * half * std::cos(t));
    } else {
      xs.push_back(t);
      ws.push_back(w);
    }
  };
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = lo + (static_cast<double>(p) + 0.5) * width;
    const double s = 0.5 * width;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0.0) {
        push(c, s * weights[i]);
        continue;
      }
      push(c - s * abscissa[i], s * weights[i]);
      push(c + s * abscissa[i], s * weights[i]);
    }
  }
}

std::size_t panels_for(double length, double h, bool sine) {
  const double effective = sine ? 0.5 * std::numbers::pi * length : length;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(effective / h)));
}

// Slice of an ellipsoid once the first k coordinates are fixed.
struct SliceData {
  Matrix coupling;  // A_GG^{-1} A_GF
  Matrix schur;     // A_FF - A_FG A_GG^{-1} A_GF
  double extent_scale = 0.0;
};

class NestedIntegrator {
 public:
  NestedIntegrator(const Objective& f, double gamma, const std::vector<EllipsoidSpec>& ellipsoids,
                   const std::vector<Integrand>& integrands, double shift, double panel_width)
      : f_(f),
        gamma_(gamma),
        ellipsoids_(ellipsoids),
        integrands_(integrands),
        shift_(shift),
        h_(panel_width),
        d_(f.dimension()),
        stride_(integrands.size() + 1),
        cells_(ellipsoids.size() + 1) {
    const auto d = static_cast<Eigen::Index>(d_);
    for (const auto& e : ellipsoids_) {
      std::vector<SliceData> per_level;
      for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index g = d - k;
        const Matrix agg = e.metric.bottomRightCorner(g, g);
        const Matrix agg_inv = agg.inverse();
        SliceData s;
        s.extent_scale = std::sqrt(agg_inv(0, 0));
        if (k > 0) {
          const Matrix agf = e.metric.bottomLeftCorner(g, k);
          s.coupling = agg_inv * agf;
          s.schur = e.metric.topLeftCorner(k, k) - agf.transpose() * s.coupling;
        }
        per_level.push_back(std::move(s));
      }
      slices_.push_back(std::move(per_level));
    }
    buffers_.assign(d_ + 1, std::vector<double>(cells_ * stride_, 0.0));
  }

  std::vector<double> run() {
    Vector w = Vector::Zero(static_cast<Eigen::Index>(d_));
    std::vector<double> acc(cells_ * stride_, 0.0);
    level(0, w, acc);
    return acc;
  }

  std::size_t stride() const { return stride_; }

 private:
  void level(std::size_t k, Vector& w, std::vector<double>& acc) {
    const auto ki = static_cast<Eigen::Index>(k);
    const Box& box = f_.domain();
    const double lo = box.lower[ki];
    const double hi = box.upper[ki];
    std::vector<double> breaks = {lo, hi};
    for (std::size_t e = 0; e < ellipsoids_.size(); ++e) {
      const EllipsoidSpec& el = ellipsoids_[e];
      const SliceData& s = slices_[e][k];
      double rho2 = el.radius * el.radius;
      double center = el.center[ki];
      if (k > 0) {
        const Vector delta = w.head(ki) - el.center.head(ki);
        rho2 -= delta.dot(s.schur * delta);
        center -= (s.coupling * delta)[0];
      }
      if (!(rho2 > 0.0)) continue;
      const double ext = std::sqrt(rho2) * s.extent_scale;
      for (double x : {center - ext, center + ext}) {
        if (x > lo && x < hi) breaks.push_back(x);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const bool innermost = k + 1 == d_;
    std::vector<double> xs;
    std::vector<double> ws;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double a = breaks[b];
      const double c = breaks[b + 1];
      if (!(c > a)) continue;
      xs.clear();
      ws.clear();
      append_rule(a, c, panels_for(c - a, h_, !innermost), !innermost, xs, ws);
      if (innermost) {
        w[ki] = 0.5 * (a + c);
        const std::size_t cell = cell_of(w);
        double* slot = acc.data() + cell * stride_;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          w[ki] = xs[i];
          const double dens = ws[i] * std::exp(-gamma_ * (f_.value(w) - shift_));
          slot[0] += dens;
          for (std::size_t j = 0; j < integrands_.size(); ++j) slot[j + 1] += dens * integrands_[j](w);
        }
      } else {
        std::vector<double>& sub = buffers_[k + 1];
        for (std::size_t i = 0; i < xs.size(); ++i) {
          w[ki] = xs[i];
          std::fill(sub.begin(), sub.end(), 0.0);
          level(k + 1, w, sub);
          for (std::size_t t = 0; t < sub.size(); ++t) acc[t] += ws[i] * sub[t];
        }
      }
    }
  }

  std::size_t cell_of(const Vector& w) const {
    for (std::size_t e = 0; e < ellipsoids_.size(); ++e) {
      if (ellipsoids_[e].contains(w)) return e;
    }
    return ellipsoids_.size();
  }

  const Objective& f_;
  double gamma_;
  const std::vector<EllipsoidSpec>& ellipsoids_;
  const std::vector<Integrand>& integrands_;
  double shift_;
  double h_;
  std::size_t d_;
  std::size_t stride_;
  std::size_t cells_;
  std::vector<std::vector<SliceData>> slices_;
  std::vector<std::vector<double>> buffers_;
};

// Visits the n^d points of an equispaced tensor grid over the box.
template <typename Fn>
void scan(const Box& box, std::size_t n, Fn&& fn) {
  const std::size_t d = box.dimension();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= n;
  Vector w(static_cast<Eigen::Index>(d));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t k = d; k-- > 0;) {
      const auto i = static_cast<Eigen::Index>(k);
      const double t = static_cast<double>(rest % n) / static_cast<double>(n - 1);
      w[i] = box.lower[i] + t * (box.upper[i] - box.lower[i]);
      rest /= n;
    }
    fn(w);
  }
}

QuadratureResult integrate_once(const Objective& f, double gamma, const std::vector<EllipsoidSpec>& ellipsoids,
                                const std::vector<Integrand>& integrands, double shift, double sigma,
                                double nodes_per_sd) {
  double h = kRuleOrder * sigma / nodes_per_sd;
  h = std::min(h, f.domain().max_width() / 8.0);
  NestedIntegrator integrator(f, gamma, ellipsoids, integrands, shift, h);
  const std::vector<double> acc = integrator.run();
  const std::size_t stride = integrator.stride();
  const std::size_t cells = ellipsoids.size() + 1;

  double total = 0.0;
  for (std::size_t c = 0; c < cells; ++c) total += acc[c * stride];
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ResolutionError("quadrature: Gibbs mass vanished or overflowed", static_cast<std::size_t>(2 * nodes_per_sd));
  }
  QuadratureResult out;
  out.nodes_per_sd = nodes_per_sd;
  out.log_z = std::log(total) - gamma * shift;
  out.expectation.assign(integrands.size(), 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const double mass = acc[c * stride];
    out.mass.push_back(mass / total);
    std::vector<double> cond(integrands.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < integrands.size(); ++j) {
      if (mass > 0.0) cond[j] = acc[c * stride + 1 + j] / mass;
      out.expectation[j] += acc[c * stride + 1 + j] / total;
    }
    out.conditional.push_back(std::move(cond));
  }
  return out;
}

bool close(double a, double b, const QuadratureSettings& s) {
  return std::abs(a - b) <= s.rel_tol * std::abs(b) + s.abs_tol;
}

}  // namespace

std::size_t QuadratureGrid::size() const {
  std::size_t n = 1;
  for (const auto& v : nodes) n *= v.size();
  return n;
}

Vector QuadratureGrid::point(std::size_t flat) const {
  Vector w(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = nodes.size(); k-- > 0;) {
    w[static_cast<Eigen::Index>(k)] = nodes[k][flat % nodes[k].size()];
    flat /= nodes[k].size();
  }
  return w;
}

double QuadratureGrid::weight(std::size_t flat) const {
  double w = 1.0;
  for (std::size_t k = nodes.size(); k-- > 0;) {
    w *= weights[k][flat % weights[k].size()];
    flat /= weights[k].size();
  }
  return w;
}

double QuadratureGrid::total_weight() const {
  double total = 1.0;
  for (const auto& w : weights) {
    double s = 0.0;
    for (double x : w) s += x;
    total *= s;
  }
  return total;
}

QuadratureGrid gauss_legendre_grid(const Box& box, std::size_t panels) {
  if (box.dimension() > kMaxDimension) throw ArgumentError("quadrature grids are limited to d <= 3");
  if (panels == 0) throw ArgumentError("gauss_legendre_grid: need at least one panel");
  QuadratureGrid g;
  g.box = box;
  for (Eigen::Index k = 0; k < box.lower.size(); ++k) {
    std::vector<double> xs;
    std::vector<double> ws;
    const double width = (box.upper[k] - box.lower[k]) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = box.lower[k] + width * static_cast<double>(p);
      append_rule(a, a + width, 1, false, xs, ws);
    }
    // The rule emits +-pairs; sort for a monotone layout.
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> sx;
    std::vector<double> sw;
    for (std::size_t i : order) {
      sx.push_back(xs[i]);
      sw.push_back(ws[i]);
    }
    g.nodes.push_back(std::move(sx));
    g.weights.push_back(std::move(sw));
  }
  return g;
}

QuadratureGrid trapezoid_grid(const Box& box, std::size_t nodes) {
  if (box.dimension() > kMaxDimension) throw ArgumentError("quadrature grids are limited to d <= 3");
  if (nodes < 2) throw ArgumentError("trapezoid_grid: need at least two nodes");
  QuadratureGrid g;
  g.box = box;
  for (Eigen::Index k = 0; k < box.lower.size(); ++k) {
    const double h = (box.upper[k] - box.lower[k]) / static_cast<double>(nodes - 1);
    std::vector<double> xs(nodes);
    std::vector<double> ws(nodes, h);
    for (std::size_t i = 0; i < nodes; ++i) xs[i] = box.lower[k] + h * static_cast<double>(i);
    xs.back() = box.upper[k];
    ws.front() = ws.back() = 0.5 * h;
    g.nodes.push_back(std::move(xs));
    g.weights.push_back(std::move(ws));
  }
  return g;
}

std::vector<double> gibbs_density_on_grid(const Objective& f, double gamma, const QuadratureGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> values(n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = f.value(grid.point(i));
    best = std::min(best, values[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = std::exp(-gamma * (values[i] - best));
    total += grid.weight(i) * values[i];
  }
  for (double& v : values) v /= total;
  return values;
}

double QuadratureResult::z() const { return std::exp(log_z); }

QuadratureResult quadrature_measure(const Objective& f, double gamma, const std::vector<EllipsoidSpec>& ellipsoids,
                                    const std::vector<Integrand>& integrands, const QuadratureSettings& settings) {
  const std::size_t d = f.dimension();
  if (d == 0 || d > kMaxDimension) throw ArgumentError("quadrature_measure: dimension must be 1, 2 or 3");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("quadrature_measure: gamma must be positive and finite");
  if (!(settings.nodes_per_sd > 0.0)) throw ArgumentError("quadrature_measure: nodes_per_sd must be positive");
  for (const auto& e : ellipsoids) {
    if (static_cast<std::size_t>(e.center.size()) != d || !is_positive_definite(e.metric) || !(e.radius >= 0.0)) {
      throw ArgumentError("quadrature_measure: malformed ellipsoid");
    }
  }

  // Shift the exponent by the smallest value seen so e^{-gamma (F - shift)} stays <= ~1.
  double shift = std::numeric_limits<double>::infinity();
  scan(f.domain(), d == 3 ? 33 : 65, [&](const Vector& w) { shift = std::min(shift, f.value(w)); });
  for (const auto& e : ellipsoids) {
    if (f.domain().contains(e.center)) shift = std::min(shift, f.value(e.center));
  }

  double curvature = 0.0;
  if (settings.curvature) {
    curvature = *settings.curvature;
  } else if (!ellipsoids.empty()) {
    for (const auto& e : ellipsoids) curvature = std::max(curvature, symmetric_eigenvalues(e.metric).maxCoeff());
  } else {
    scan(f.domain(), 9, [&](const Vector& w) {
      const Matrix h = f.jet(w).hessian;
      curvature = std::max(curvature, symmetric_eigenvalues(0.5 * (h + h.transpose())).cwiseAbs().maxCoeff());
    });
  }
  if (!(curvature > 0.0)) curvature = 1.0;
  const double sigma = 1.0 / std::sqrt(gamma * curvature);

  QuadratureResult fine = integrate_once(f, gamma, ellipsoids, integrands, shift, sigma, settings.nodes_per_sd);
  if (!settings.richardson) return fine;
  const QuadratureResult base = fine;
  fine = integrate_once(f, gamma, ellipsoids, integrands, shift, sigma, 2.0 * settings.nodes_per_sd);

  bool ok = std::abs(fine.log_z - base.log_z) <= settings.rel_tol;
  for (std::size_t c = 0; ok && c < fine.mass.size(); ++c) {
    ok = close(base.mass[c], fine.mass[c], settings);
    if (fine.mass[c] > 1e-10) {
      for (std::size_t j = 0; ok && j < integrands.size(); ++j) {
        ok = close(base.conditional[c][j], fine.conditional[c][j], settings);
      }
    }
  }
  for (std::size_t j = 0; ok && j < integrands.size(); ++j) ok = close(base.expectation[j], fine.expectation[j], settings);
  if (!ok) {
    const auto suggested = static_cast<std::size_t>(std::ceil(4.0 * settings.nodes_per_sd));
    throw ResolutionError("quadrature: doubling the resolution changed the result beyond tolerance; try nodes_per_sd = " +
                              std::to_string(suggested),
                          suggested);
  }
  return fine;
}

}  // namespace gibbslab
