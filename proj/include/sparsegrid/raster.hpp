#pragma once

#include "sparsegrid/pattern.hpp"
#include "sparsegrid/types.hpp"

#include <filesystem>
#include <vector>

namespace sparsegrid {

/// Image with an acquisition bitmap; values are meaningful only where mask is set.
struct SampledImage {
  GrayImage values;
  Bitmap mask;

  GridDims dims() const { return dims_of(values); }
  std::size_t sample_count() const { return static_cast<std::size_t>(mask.count()); }
};

/// Reads 8-bit binary PGM (P5, maxval 255). Throws UnsupportedFormat for other
/// PNM variants or bit depths, CorruptHeader for malformed or truncated files.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage decode_pgm(std::span<const unsigned char> bytes);

/// Writes P5 PGM; values are rounded to nearest and clipped to [0, 255].
void save_pgm(const GrayImage& image, const std::filesystem::path& path);
std::vector<unsigned char> encode_pgm(const GrayImage& image);

/// Rounds to the nearest gray level and clips to [0, 255].
template <typename Derived>
GrayImage quantize8(const Eigen::DenseBase<Derived>& image) {
  return image.derived().array().round().max(0.0).min(255.0);
}

inline GrayImage bitmap_to_gray(const Bitmap& bits) {
  return bits.cast<double>() * 255.0;
}

Coord center_crop_offset(GridDims source, GridDims crop);

/// Copies pixel values at the prefix cells; the mask is the prefix bitmap.
SampledImage apply_mask(const GrayImage& image, const DensityPrefix& prefix);

/// Fully sampled image (mask all true).
SampledImage fully_sampled(const GrayImage& image);

/// Centered window; when the margin is odd the extra pixel goes to the bottom/right
/// so the window leans toward the top-left. Throws CropTooLarge.
template <typename Derived>
auto center_crop(const Eigen::DenseBase<Derived>& image, GridDims crop) {
  using Plain = typename Derived::PlainObject;
  const Coord off = center_crop_offset(dims_of(image), crop);
  return Plain(image.derived().block(off.y, off.x, crop.height, crop.width));
}

}  // namespace sparsegrid
