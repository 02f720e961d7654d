#pragma once

#include "gibbslab/linalg.hpp"

#include <cstddef>
#include <vector>

namespace gibbslab {

/// Radical-inverse Halton point with the given index (index 0 is skipped internally) in [0,1)^dim.
Vector halton_point(std::size_t index, std::size_t dim);

/// Deterministic quasi-uniform points in the closed unit ball of R^dim.
/// The 2*dim axis endpoints (+-e_k) are always included first.
std::vector<Vector> unit_ball_points(std::size_t count, std::size_t dim);

/// Deterministic quasi-uniform probes in the box shrunk about its center by `shrink`.
std::vector<Vector> box_probes(const Box& box, std::size_t count, double shrink = 0.9);

}  // namespace gibbslab
