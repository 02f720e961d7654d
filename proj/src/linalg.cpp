#include "gibbslab/linalg.hpp"

#include "gibbslab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gibbslab {

Box::Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw ArgumentError("box bounds must be non-empty and of equal dimension");
  }
  for (Eigen::Index k = 0; k < lower.size(); ++k) {
    if (!(lower[k] < upper[k])) throw ArgumentError("box requires lower < upper in every coordinate");
  }
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box(Vector::Constant(static_cast<Eigen::Index>(dim), lo),
             Vector::Constant(static_cast<Eigen::Index>(dim), hi));
}

bool Box::contains(const Vector& w) const {
  if (w.size() != lower.size()) return false;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (!(w[k] >= lower[k] && w[k] <= upper[k])) return false;
  }
  return true;
}

double Box::volume() const { return widths().prod(); }

double Box::max_width() const { return widths().maxCoeff(); }

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Vector symmetric_eigenvalues(const Matrix& a) {
  if (!is_symmetric(a)) throw ArgumentError("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double smallest_nonzero_eigenvalue(const Matrix& a) {
  const Vector eig = symmetric_eigenvalues(a);
  const double lmax = eig.maxCoeff();
  if (lmax <= 0.0) return 0.0;
  const double threshold = kZeroEigenvalueRatio * lmax;
  for (Eigen::Index k = 0; k < eig.size(); ++k) {
    if (eig[k] > threshold) return eig[k];
  }
  return 0.0;
}

std::size_t numerical_rank(const Matrix& a) {
  const Vector eig = symmetric_eigenvalues(a);
  const double lmax = eig.maxCoeff();
  if (lmax <= 0.0) return 0;
  const double threshold = kZeroEigenvalueRatio * lmax;
  return static_cast<std::size_t>((eig.array() > threshold).count());
}

bool is_positive_definite(const Matrix& a) {
  if (!is_symmetric(a)) return false;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return false;
  return symmetric_eigenvalues(a).minCoeff() > 0.0;
}

bool is_positive_semidefinite(const Matrix& a) {
  if (!is_symmetric(a)) return false;
  const Vector eig = symmetric_eigenvalues(a);
  const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
  return eig.minCoeff() >= -kZeroEigenvalueRatio * scale;
}

double log_det_spd(const Matrix& a) {
  if (!is_symmetric(a)) throw ArgumentError("log_det_spd: matrix is not symmetric");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw ArgumentError("log_det_spd: matrix is not positive definite");
  const Matrix& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) {
    if (!(l(k, k) > 0.0)) throw ArgumentError("log_det_spd: matrix is not positive definite");
    sum += std::log(l(k, k));
  }
  return 2.0 * sum;
}

}  // namespace gibbslab
