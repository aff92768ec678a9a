#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <compare>

namespace sparsegrid {

struct GridDims {
  int width = 0;
  int height = 0;

  std::size_t cells() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  bool operator==(const GridDims&) const = default;
};

// Pixel position: x is the column, y is the row.
struct Coord {
  int x = 0;
  int y = 0;

  auto operator<=>(const Coord&) const = default;
};

inline bool in_bounds(const GridDims& dims, const Coord& c) {
  return c.x >= 0 && c.y >= 0 && c.x < dims.width && c.y < dims.height;
}

inline std::size_t linear_index(const GridDims& dims, const Coord& c) {
  return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(dims.width) + static_cast<std::size_t>(c.x);
}

inline Coord coord_of(const GridDims& dims, std::size_t index) {
  return {static_cast<int>(index % static_cast<std::size_t>(dims.width)),
          static_cast<int>(index / static_cast<std::size_t>(dims.width))};
}

/// Row-major dense raster; rows() is the image height, cols() the width.
template <typename Scalar>
using Raster = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = Raster<double>;
using Bitmap = Raster<bool>;

template <typename Derived>
GridDims dims_of(const Eigen::DenseBase<Derived>& raster) {
  return {static_cast<int>(raster.cols()), static_cast<int>(raster.rows())};
}

}  // namespace sparsegrid
