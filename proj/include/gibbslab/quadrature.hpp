#pragma once

#include "gibbslab/landscape.hpp"
#include "gibbslab/objective.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace gibbslab {

using Integrand = std::function<double(const Vector&)>;

/// Tensor-product grid over a box, d <= 3. Flat indices are row-major (last coordinate fastest).
struct QuadratureGrid {
  Box box;
  std::vector<std::vector<double>> nodes;
  std::vector<std::vector<double>> weights;

  std::size_t size() const;
  Vector point(std::size_t flat) const;
  double weight(std::size_t flat) const;
  double total_weight() const;
};

/// Composite 10-point Gauss-Legendre with `panels` equal panels per coordinate.
QuadratureGrid gauss_legendre_grid(const Box& box, std::size_t panels);
/// Trapezoid rule with `nodes` equispaced nodes per coordinate.
QuadratureGrid trapezoid_grid(const Box& box, std::size_t nodes);

/// e^{-gamma F} at the grid points, normalized so that sum_j weight_j p_j = 1.
std::vector<double> gibbs_density_on_grid(const Objective& f, double gamma, const QuadratureGrid& grid);

struct QuadratureSettings {
  double nodes_per_sd = 20.0;
  /// lambda_max of the sharpest well; defaults to the largest ellipsoid metric eigenvalue,
  /// or a coarse Hessian scan when no ellipsoids are given.
  std::optional<double> curvature;
  bool richardson = true;
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
};

/// Cells are the supplied ellipsoids in order, then the complement of their union (last).
struct QuadratureResult {
  double log_z = 0.0;
  std::vector<double> mass;
  /// conditional[c][j] = E[g_j | cell c]; NaN for a cell of zero mass.
  std::vector<std::vector<double>> conditional;
  std::vector<double> expectation;
  double nodes_per_sd = 0.0;

  double z() const;
  std::size_t complement_cell() const { return mass.size() - 1; }
};

/// Gibbs measure e^{-gamma F} / Z on F's domain, split into ellipsoid cells. Nested
/// region-aware composite Gauss-Legendre (d <= 3) with breakpoints at every cell boundary.
/// With `richardson`, the result at doubled resolution must agree to rel_tol, otherwise
/// ResolutionError carries a suggested nodes-per-sd.
QuadratureResult quadrature_measure(const Objective& f, double gamma, const std::vector<EllipsoidSpec>& ellipsoids = {},
                                    const std::vector<Integrand>& integrands = {}, const QuadratureSettings& settings = {});

}  // namespace gibbslab
