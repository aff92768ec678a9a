#pragma once

#include "sparsegrid/pattern.hpp"
#include "sparsegrid/probability_field.hpp"
#include "sparsegrid/rng.hpp"

#include <optional>
#include <string_view>

namespace sparsegrid {

enum class PatternType { Rand, Sobol, Gauss };

std::string_view to_string(PatternType type);
/// Accepts "rand", "sobol", "gauss".
std::optional<PatternType> parse_pattern_type(std::string_view name);

/// Incremental uniform random pattern. Cells are drawn uniformly from the whole
/// grid; repeats are skipped, so each step is uniform over unsampled cells.
SamplingPattern gen_rand(GridDims dims, std::size_t count, RngSeed seed);

/// Incremental Sobol pattern: skips the first 4*W*H points of the 2-D Sobol
/// sequence, then walks the next 4*W*H, scaling to [0,W)x[0,H), flooring and
/// skipping cells already emitted. Throws SobolExhausted when that budget yields
/// fewer than `count` distinct cells.
SamplingPattern gen_sobol(GridDims dims, std::size_t count);

struct GaussStats {
  std::size_t fallbackDraws = 0;
};

/// Incremental pattern drawn from the suppression field: each new cell is drawn
/// with probability proportional to its current field weight, then the field is
/// updated around it.
SamplingPattern gen_gauss(GridDims dims, std::size_t count, RngSeed seed, const GaussParams& params = {},
                          GaussStats* stats = nullptr);

/// Dispatches on type; the seed is ignored for Sobol.
SamplingPattern generate(PatternType type, GridDims dims, std::size_t count, RngSeed seed,
                         const GaussParams& params = {});

}  // namespace sparsegrid
