#pragma once

#include "sparsegrid/types.hpp"

#include <span>
#include <vector>

namespace sparsegrid {

/// Ordered, duplicate-free list of in-bounds cells in acquisition order.
///
/// Every prefix of the point list is itself a valid pattern, which is what
/// makes a pattern incremental: acquiring point n+1 never invalidates the
/// first n. Two patterns with the same point set but different order are
/// different patterns.
class SamplingPattern {
 public:
  SamplingPattern() = default;

  /// Validates the points; throws Error{OutOfBounds} or Error{DuplicatePoint}.
  SamplingPattern(GridDims dims, std::vector<Coord> points);

  const GridDims& dims() const { return dims_; }
  std::span<const Coord> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  bool operator==(const SamplingPattern&) const = default;

 private:
  GridDims dims_;
  std::vector<Coord> points_;
};

/// View of the first `count` points of a pattern.
struct DensityPrefix {
  const SamplingPattern* pattern = nullptr;
  std::size_t count = 0;

  const GridDims& dims() const { return pattern->dims(); }
  std::span<const Coord> points() const { return pattern->points().first(count); }
  double density() const { return static_cast<double>(count) / static_cast<double>(dims().cells()); }
};

/// round(density * W * H) with ties away from zero.
std::size_t density_to_count(const GridDims& dims, double density);

/// First round(density*W*H) points. Throws InvalidArgument for density outside
/// (0, 1] and InsufficientPoints if the pattern is too short.
DensityPrefix prefix(const SamplingPattern& pattern, double density);
DensityPrefix prefix_of_count(const SamplingPattern& pattern, std::size_t count);

Bitmap to_bitmap(const DensityPrefix& prefix);

}  // namespace sparsegrid
