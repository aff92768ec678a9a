#pragma once

#include "sparsegrid/pattern.hpp"
#include "sparsegrid/rng.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sparsegrid {

struct UnitPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Cell centers mapped to the unit square: ((x + 0.5) / W, (y + 0.5) / H).
std::vector<UnitPoint> to_unit_points(const DensityPrefix& prefix);

/// Half-open axis-aligned box [u0, u1) x [v0, v1) inside the unit square.
struct RectQuery {
  double u0 = 0.0, v0 = 0.0, u1 = 1.0, v1 = 1.0;

  double area() const { return (u1 - u0) * (v1 - v0); }
  bool contains(const UnitPoint& p) const { return p.u >= u0 && p.u < u1 && p.v >= v0 && p.v < v1; }
};

/// Each axis interval is the sorted pair of two uniform draws.
std::vector<RectQuery> random_rectangles(std::size_t count, RngSeed seed);

struct DiscrepancyReport {
  // Max of | |S∩B|/|S| - A_B | over the tested boxes, each also slid to the
  // tightest and widest box containing the same points.
  double supEstimate = 0.0;
  double meanAbsDeviation = 0.0;  // mean deviation of the boxes as drawn; the "randomness measure"
  std::size_t rectanglesTested = 0;
  RngSeed seed = 0;
};

/// Normalized deviation | |S∩B|/|S| - A_B | of one box.
double box_deviation(std::span<const UnitPoint> points, const RectQuery& box);

/// Monte-Carlo estimate over `rectangles` random boxes. Throws EmptyPointSet,
/// InvalidArgument when rectangles == 0.
DiscrepancyReport estimate_discrepancy(std::span<const UnitPoint> points, std::size_t rectangles, RngSeed seed);

/// Exact supremum of | |S∩B|/|S| - A_B | over half-open boxes with A_B < 1, by
/// enumerating the critical boxes whose edges sit at point coordinates or on
/// the domain boundary. O(n^4); throws TooManyPoints above 256 points.
/// Returns 0 for the empty set.
double exact_discrepancy(std::span<const UnitPoint> points);

inline constexpr std::size_t kExactDiscrepancyMaxPoints = 256;

struct MetropolisOptions {
  std::size_t steps = 10'000;
  std::optional<double> t0;  // defaults to the starting measure
  double cooling = 0.999;    // T_{k+1} = cooling * T_k
  std::size_t rectangles = 2'000;
  RngSeed seed = 1;
};

struct MetropolisResult {
  SamplingPattern pattern;     // best pattern seen; prefix order is not meaningful
  double initialMeasure = 0.0;
  double bestMeasure = 0.0;
  std::size_t acceptedMoves = 0;
  std::vector<double> bestTrace;  // best measure after each step
  bool incremental = false;       // swaps destroy the acquisition order
};

/// Swap optimizer: each step exchanges a sampled with an unsampled cell and
/// keeps the move if the measure (mean deviation over a fixed box set) drops,
/// otherwise with probability exp(-delta / T). Throws InvalidSchedule.
MetropolisResult metropolis_optimize(const SamplingPattern& pattern, double density, const MetropolisOptions& options);

}  // namespace sparsegrid
