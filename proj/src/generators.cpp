#include "sparsegrid/generators.hpp"

#include "sparsegrid/error.hpp"
#include "sparsegrid/sobol.hpp"

#include <string>

namespace sparsegrid {

namespace {

void check_count(GridDims dims, std::size_t count) {
  if (dims.width < 1 || dims.height < 1) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  if (count > dims.cells()) {
    throw Error(ErrorCode::CountTooLarge,
                std::to_string(count) + " points requested on a grid of " + std::to_string(dims.cells()) + " cells");
  }
}

}  // namespace

std::string_view to_string(PatternType type) {
  switch (type) {
    case PatternType::Rand: return "rand";
    case PatternType::Sobol: return "sobol";
    case PatternType::Gauss: return "gauss";
  }
  return "?";
}

std::optional<PatternType> parse_pattern_type(std::string_view name) {
  if (name == "rand") return PatternType::Rand;
  if (name == "sobol") return PatternType::Sobol;
  if (name == "gauss") return PatternType::Gauss;
  return std::nullopt;
}

SamplingPattern gen_rand(GridDims dims, std::size_t count, RngSeed seed) {
  check_count(dims, count);
  Rng rng(seed);
  std::vector<bool> taken(dims.cells(), false);
  std::vector<Coord> points;
  points.reserve(count);
  while (points.size() < count) {
    const auto idx = static_cast<std::size_t>(rng.below(dims.cells()));
    if (taken[idx]) continue;
    taken[idx] = true;
    points.push_back(coord_of(dims, idx));
  }
  return SamplingPattern(dims, std::move(points));
}

SamplingPattern gen_sobol(GridDims dims, std::size_t count) {
  check_count(dims, count);
  const std::uint64_t budget = 4 * static_cast<std::uint64_t>(dims.cells());
  if (2 * budget > Sobol2D::kPeriod) throw Error(ErrorCode::SobolExhausted, "grid too large for 32-bit Sobol");

  Sobol2D sobol(budget);
  std::vector<bool> taken(dims.cells(), false);
  std::vector<Coord> points;
  points.reserve(count);
  const auto w = static_cast<std::uint64_t>(dims.width);
  const auto h = static_cast<std::uint64_t>(dims.height);
  for (std::uint64_t i = 0; i < budget && points.size() < count; ++i) {
    const auto p = sobol.next();
    // floor(u * W) computed exactly in fixed point.
    const Coord c{static_cast<int>((p[0] * w) >> 32), static_cast<int>((p[1] * h) >> 32)};
    const std::size_t idx = linear_index(dims, c);
    if (taken[idx]) continue;
    taken[idx] = true;
    points.push_back(c);
  }
  if (points.size() < count) {
    throw Error(ErrorCode::SobolExhausted, std::to_string(budget) + " Sobol draws gave only " +
                                               std::to_string(points.size()) + " distinct cells");
  }
  return SamplingPattern(dims, std::move(points));
}

SamplingPattern gen_gauss(GridDims dims, std::size_t count, RngSeed seed, const GaussParams& params,
                          GaussStats* stats) {
  check_count(dims, count);
  ProbabilityField field(dims, params);
  Rng rng(seed);
  std::vector<Coord> points;
  points.reserve(count);
  GaussStats local;
  while (points.size() < count) {
    std::optional<Coord> c = field.sample(rng.uniform());
    if (!c) {
      if (!params.uniformFallback) {
        throw Error(ErrorCode::DegenerateField, "all remaining weights underflowed after " +
                                                    std::to_string(points.size()) + " draws");
      }
      c = field.sample_remaining(rng.uniform());
      ++local.fallbackDraws;
    }
    field.update(*c);
    points.push_back(*c);
  }
  if (stats) *stats = local;
  return SamplingPattern(dims, std::move(points));
}

SamplingPattern generate(PatternType type, GridDims dims, std::size_t count, RngSeed seed,
                         const GaussParams& params) {
  switch (type) {
    case PatternType::Rand: return gen_rand(dims, count, seed);
    case PatternType::Sobol: return gen_sobol(dims, count);
    case PatternType::Gauss: return gen_gauss(dims, count, seed, params);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown pattern type");
}

}  // namespace sparsegrid
