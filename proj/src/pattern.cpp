#include "sparsegrid/pattern.hpp"

#include "sparsegrid/error.hpp"

#include <cmath>
#include <string>

namespace sparsegrid {

SamplingPattern::SamplingPattern(GridDims dims, std::vector<Coord> points)
    : dims_(dims), points_(std::move(points)) {
  if (dims_.width < 1 || dims_.height < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  }
  std::vector<bool> seen(dims_.cells(), false);
  for (const Coord& c : points_) {
    if (!in_bounds(dims_, c)) {
      throw Error(ErrorCode::OutOfBounds,
                  "point (" + std::to_string(c.x) + ", " + std::to_string(c.y) + ") outside grid");
    }
    auto idx = linear_index(dims_, c);
    if (seen[idx]) {
      throw Error(ErrorCode::DuplicatePoint,
                  "point (" + std::to_string(c.x) + ", " + std::to_string(c.y) + ") repeated");
    }
    seen[idx] = true;
  }
}

std::size_t density_to_count(const GridDims& dims, double density) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
  }
  // std::llround rounds halfway cases away from zero.
  return static_cast<std::size_t>(std::llround(density * static_cast<double>(dims.cells())));
}

DensityPrefix prefix_of_count(const SamplingPattern& pattern, std::size_t count) {
  if (count > pattern.size()) {
    throw Error(ErrorCode::InsufficientPoints, "pattern holds " + std::to_string(pattern.size()) +
                                                   " points, prefix needs " + std::to_string(count));
  }
  return {&pattern, count};
}

DensityPrefix prefix(const SamplingPattern& pattern, double density) {
  return prefix_of_count(pattern, density_to_count(pattern.dims(), density));
}

Bitmap to_bitmap(const DensityPrefix& prefix) {
  const GridDims& d = prefix.dims();
  Bitmap bits = Bitmap::Constant(d.height, d.width, false);
  for (const Coord& c : prefix.points()) bits(c.y, c.x) = true;
  return bits;
}

}  // namespace sparsegrid
