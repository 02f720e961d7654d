#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace gibbslab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative threshold below which an eigenvalue of a PSD matrix counts as zero.
inline constexpr double kZeroEigenvalueRatio = 1e-10;

/// Closed axis-aligned box, the experiment domain W.
struct Box {
  Vector lower;
  Vector upper;

  Box() = default;
  Box(Vector lo, Vector hi);
  /// Same interval [lo, hi] in every one of `dim` coordinates.
  static Box cube(std::size_t dim, double lo, double hi);

  std::size_t dimension() const { return static_cast<std::size_t>(lower.size()); }
  bool contains(const Vector& w) const;
  Vector center() const { return 0.5 * (lower + upper); }
  Vector widths() const { return upper - lower; }
  double volume() const;
  double max_width() const;
};

/// Value, gradient and Hessian of a scalar function at one point.
struct RiskJet {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

bool is_symmetric(const Matrix& a, double rel_tol = 1e-10);

/// Ascending eigenvalues of a symmetric matrix. Throws ArgumentError if `a` is not symmetric.
Vector symmetric_eigenvalues(const Matrix& a);

/// Smallest eigenvalue strictly above kZeroEigenvalueRatio * lambda_max; 0 for the zero matrix.
double smallest_nonzero_eigenvalue(const Matrix& a);

/// Number of eigenvalues above the zero threshold.
std::size_t numerical_rank(const Matrix& a);

bool is_positive_definite(const Matrix& a);
bool is_positive_semidefinite(const Matrix& a);

/// log det of a symmetric positive definite matrix; ArgumentError otherwise.
double log_det_spd(const Matrix& a);

/// (x)^T A (x)
inline double quadratic_form(const Vector& x, const Matrix& a) { return x.dot(a * x); }

}  // namespace gibbslab
