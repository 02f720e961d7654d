#include "gibbslab/low_discrepancy.hpp"

#include "gibbslab/errors.hpp"

#include <array>

namespace gibbslab {

namespace {

constexpr std::array<unsigned, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::size_t index, unsigned base) {
  double inv_base = 1.0 / base;
  double factor = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return result;
}

}  // namespace

Vector halton_point(std::size_t index, std::size_t dim) {
  if (dim == 0 || dim > kPrimes.size()) throw ArgumentError("halton_point: dimension must be in [1, 16]");
  Vector p(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) p[static_cast<Eigen::Index>(k)] = radical_inverse(index + 1, kPrimes[k]);
  return p;
}

std::vector<Vector> unit_ball_points(std::size_t count, std::size_t dim) {
  std::vector<Vector> out;
  out.reserve(count);
  const auto d = static_cast<Eigen::Index>(dim);
  for (Eigen::Index k = 0; k < d && out.size() < count; ++k) {
    out.push_back(Vector::Unit(d, k));
    if (out.size() < count) out.push_back(-Vector::Unit(d, k));
  }
  if (dim == 1) {
    // Evenly spaced interior points; the endpoints are already present.
    const std::size_t remaining = count - out.size();
    for (std::size_t j = 0; j < remaining; ++j) {
      Vector p(1);
      p[0] = -1.0 + 2.0 * (static_cast<double>(j) + 1.0) / (static_cast<double>(remaining) + 1.0);
      out.push_back(p);
    }
    return out;
  }
  std::size_t index = 0;
  const std::size_t max_draws = 1'000'000 * dim;
  while (out.size() < count) {
    if (index > max_draws) throw ArgumentError("unit_ball_points: dimension too high for rejection sampling");
    Vector p = 2.0 * halton_point(index++, dim).array() - 1.0;
    if (p.squaredNorm() <= 1.0) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vector> box_probes(const Box& box, std::size_t count, double shrink) {
  std::vector<Vector> out;
  out.reserve(count);
  const Vector c = box.center();
  const Vector half = 0.5 * shrink * box.widths();
  for (std::size_t j = 0; j < count; ++j) {
    const Vector u = 2.0 * halton_point(j, box.dimension()).array() - 1.0;
    out.push_back(c + half.cwiseProduct(u));
  }
  return out;
}

}  // namespace gibbslab
