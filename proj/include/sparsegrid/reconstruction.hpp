#pragma once

#include "sparsegrid/raster.hpp"

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace sparsegrid {

enum class Reconstructor { Lin, Fsr };

std::string_view to_string(Reconstructor r);
std::optional<Reconstructor> parse_reconstructor(std::string_view name);

/// Piecewise-linear interpolation over the Delaunay triangulation of the
/// sampled pixels. Pixels outside the convex hull take the value of the nearest
/// sampled pixel (Euclidean). Sampled pixels keep their values exactly.
/// Throws DegenerateGeometry when fewer than 3 samples exist or all are collinear;
/// a fully sampled input is returned unchanged.
GrayImage lin_reconstruct(const SampledImage& sampled);

/// Index of the nearest set pixel for every pixel, by exact Euclidean distance
/// transform. Returned as linear indices (y * W + x); -1 when the mask is empty.
Raster<int> nearest_set_pixel(const Bitmap& mask);

struct FsrParams {
  int blockSize = 4;
  int windowSize = 32;
  int iterations = 100;
  double rho = 0.7;    // spatial weight decay per pixel of distance from the block center
  double gamma = 0.5;  // fraction of each projection coefficient taken per iteration
  double delta = 0.0;  // weight of previously reconstructed pixels; only 0 is supported
  // Scale each candidate's energy reduction by a prior that decays linearly from
  // 1 at DC to 0 at the highest radial frequency.
  bool frequencyPrior = true;

  /// Throws InvalidParams.
  void validate() const;
};

/// Plain key=value config; keys block_size, window_size, iterations, rho,
/// gamma, delta, frequency_prior. '#' starts a comment. Unspecified keys keep
/// the values in `base`. Throws FormatError with the line number.
FsrParams parse_fsr_config(std::string_view text, FsrParams base = {});
FsrParams load_fsr_config(const std::filesystem::path& path, FsrParams base = {});
std::string format_fsr_config(const FsrParams& params);

enum class BlockOrder { Forward, Reverse };

struct FsrExecution {
  unsigned threads = 1;
  BlockOrder order = BlockOrder::Forward;
};

/// Block-wise frequency selective reconstruction with delta = 0: every block is
/// extrapolated from the originally sampled pixels of its window only, so blocks
/// are independent and the result does not depend on order or thread count.
/// Output is clipped to [0, 255]; sampled pixels pass through unchanged.
GrayImage fsr_reconstruct(const SampledImage& sampled, const FsrParams& params = {}, const FsrExecution& exec = {});

/// Sparse Fourier model of one square window, fitted by weighted greedy
/// selection. `values` and `weights` are windowSize x windowSize; weights are 0
/// where no sample exists. Returns the model evaluated on the whole window.
/// Exposed for testing the per-window fit.
GrayImage fit_window_model(const GrayImage& values, const GrayImage& weights, const FsrParams& params,
                           int iterations);

/// rho^d with d the Euclidean distance of each window pixel from the window center.
GrayImage window_decay(const FsrParams& params);

std::string_view to_string(BlockOrder order);

}  // namespace sparsegrid
