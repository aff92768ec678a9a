#pragma once

#include "sparsegrid/error.hpp"
#include "sparsegrid/types.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace sparsegrid {

inline constexpr double kPeak8Bit = 255.0;

struct PsnrResult {
  double mse = 0.0;
  double psnrDb = std::numeric_limits<double>::infinity();  // +inf when mse == 0
  double peak = kPeak8Bit;

  bool infinite() const { return std::isinf(psnrDb); }
};

inline PsnrResult psnr_from_mse(double mse, double peak = kPeak8Bit) {
  PsnrResult r;
  r.mse = mse;
  r.peak = peak;
  r.psnrDb = mse > 0.0 ? 10.0 * std::log10(peak * peak / mse) : std::numeric_limits<double>::infinity();
  return r;
}

/// PSNR of two equally sized rasters on the 8-bit scale. Works on any Eigen
/// array expression; no clipping is applied. Throws DimsMismatch.
template <typename DerivedA, typename DerivedB>
PsnrResult psnr(const Eigen::ArrayBase<DerivedA>& reference, const Eigen::ArrayBase<DerivedB>& candidate) {
  if (reference.rows() != candidate.rows() || reference.cols() != candidate.cols()) {
    throw Error(ErrorCode::DimsMismatch, "PSNR operands differ in size");
  }
  if (reference.size() == 0) throw Error(ErrorCode::EmptySet, "PSNR of empty rasters");
  const double mse = (reference.template cast<double>() - candidate.template cast<double>()).square().mean();
  return psnr_from_mse(mse);
}

enum class MeanMode {
  Plain,       // an infinite entry makes the mean infinite
  FiniteOnly,  // infinite entries are left out
  Strict,      // an infinite entry throws InfiniteEntry
};

/// Arithmetic mean of per-image PSNR values in dB.
double mean_psnr(std::span<const double> psnr_db, MeanMode mode = MeanMode::Plain);

/// Per-image PSNR of aligned reference/candidate sets, then their mean.
/// Throws EmptySet, DimsMismatch.
template <typename Image>
double mean_psnr(std::span<const Image> references, std::span<const Image> candidates, MeanMode mode = MeanMode::Plain) {
  if (references.size() != candidates.size()) throw Error(ErrorCode::DimsMismatch, "image sets differ in length");
  std::vector<double> values;
  values.reserve(references.size());
  for (std::size_t i = 0; i < references.size(); ++i) values.push_back(psnr(references[i], candidates[i]).psnrDb);
  return mean_psnr(std::span<const double>(values), mode);
}

inline double mean_psnr(std::span<const double> psnr_db, MeanMode mode) {
  if (psnr_db.empty()) throw Error(ErrorCode::EmptySet, "mean of an empty PSNR set");
  double sum = 0.0;
  std::size_t used = 0;
  for (double v : psnr_db) {
    if (std::isinf(v)) {
      if (mode == MeanMode::Strict) throw Error(ErrorCode::InfiniteEntry, "infinite PSNR in strict mean");
      if (mode == MeanMode::FiniteOnly) continue;
    }
    sum += v;
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::EmptySet, "no finite PSNR values");
  return sum / static_cast<double>(used);
}

}  // namespace sparsegrid
