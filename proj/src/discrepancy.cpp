#include "sparsegrid/discrepancy.hpp"

#include "sparsegrid/error.hpp"

#include <algorithm>
#include <cmath>

namespace sparsegrid {

std::vector<UnitPoint> to_unit_points(const DensityPrefix& prefix) {
  const double w = prefix.dims().width;
  const double h = prefix.dims().height;
  std::vector<UnitPoint> out;
  out.reserve(prefix.count);
  for (const Coord& c : prefix.points()) out.push_back({(c.x + 0.5) / w, (c.y + 0.5) / h});
  return out;
}

std::vector<RectQuery> random_rectangles(std::size_t count, RngSeed seed) {
  Rng rng(seed);
  std::vector<RectQuery> boxes;
  boxes.reserve(count);
  auto interval = [&rng](double& lo, double& hi) {
    do {
      lo = rng.uniform();
      hi = rng.uniform();
    } while (lo == hi);
    if (lo > hi) std::swap(lo, hi);
  };
  while (boxes.size() < count) {
    RectQuery b;
    interval(b.u0, b.u1);
    interval(b.v0, b.v1);
    boxes.push_back(b);
  }
  return boxes;
}

double box_deviation(std::span<const UnitPoint> points, const RectQuery& box) {
  std::size_t inside = 0;
  for (const UnitPoint& p : points) inside += box.contains(p) ? 1 : 0;
  return std::abs(static_cast<double>(inside) / static_cast<double>(points.size()) - box.area());
}

namespace {

struct Extent {
  double lo, hi;
  bool openLo;  // lo sits on an excluded point coordinate
  bool holds(double x) const { return (openLo ? x > lo : x >= lo) && x < hi; }
};

// Widest box that still excludes every point outside `box`, growing the u
// edges first when `uFirst`, else the v edges. Edges stop at the first outside
// point in that direction; the result is the limit of boxes with the same count.
double widest_area(std::span<const UnitPoint> points, const RectQuery& box, bool uFirst) {
  Extent eu{box.u0, box.u1, false}, ev{box.v0, box.v1, false};
  auto grow = [&](Extent& e, const Extent& other, bool alongU) {
    double lo = 0.0, hi = 1.0;
    bool open = false;
    for (const UnitPoint& p : points) {
      const double a = alongU ? p.u : p.v;
      const double b = alongU ? p.v : p.u;
      if (!other.holds(b) || e.holds(a)) continue;
      if (a < e.lo || (e.openLo && a == e.lo)) {
        if (a >= lo) {
          lo = a;
          open = true;
        }
      } else {
        hi = std::min(hi, a);
      }
    }
    e = {lo, hi, open};
  };
  if (uFirst) {
    grow(eu, ev, true);
    grow(ev, eu, false);
  } else {
    grow(ev, eu, false);
    grow(eu, ev, true);
  }
  return (eu.hi - eu.lo) * (ev.hi - ev.lo);
}

// Largest deviation over all boxes containing the same points as `box`,
// approximated by its two extremes: the tightest box around the contained
// points and the widest box excluding the others.
double class_deviation(std::span<const UnitPoint> points, const RectQuery& box, std::size_t inside) {
  const double n = static_cast<double>(points.size());
  const double share = static_cast<double>(inside) / n;
  double best = 0.0;
  if (inside > 0) {
    double u0 = 1, u1 = 0, v0 = 1, v1 = 0;
    for (const UnitPoint& p : points) {
      if (!box.contains(p)) continue;
      u0 = std::min(u0, p.u);
      u1 = std::max(u1, p.u);
      v0 = std::min(v0, p.v);
      v1 = std::max(v1, p.v);
    }
    best = share - (u1 - u0) * (v1 - v0);
  }
  if (inside < points.size()) {
    best = std::max(best, widest_area(points, box, true) - share);
    best = std::max(best, widest_area(points, box, false) - share);
  }
  return best;
}

}  // namespace

DiscrepancyReport estimate_discrepancy(std::span<const UnitPoint> points, std::size_t rectangles, RngSeed seed) {
  if (points.empty()) throw Error(ErrorCode::EmptyPointSet, "discrepancy of an empty point set");
  if (rectangles == 0) throw Error(ErrorCode::InvalidArgument, "at least one rectangle required");
  DiscrepancyReport report;
  report.rectanglesTested = rectangles;
  report.seed = seed;
  double sum = 0.0;
  const double n = static_cast<double>(points.size());
  for (const RectQuery& box : random_rectangles(rectangles, seed)) {
    std::size_t inside = 0;
    for (const UnitPoint& p : points) inside += box.contains(p) ? 1 : 0;
    const double d = std::abs(static_cast<double>(inside) / n - box.area());
    report.supEstimate = std::max({report.supEstimate, d, class_deviation(points, box, inside)});
    sum += d;
  }
  report.meanAbsDeviation = sum / static_cast<double>(rectangles);
  return report;
}

double exact_discrepancy(std::span<const UnitPoint> points) {
  if (points.size() > kExactDiscrepancyMaxPoints) {
    throw Error(ErrorCode::TooManyPoints, "exact discrepancy limited to 256 points");
  }
  if (points.empty()) return 0.0;
  const double n = static_cast<double>(points.size());

  std::vector<double> us, vs;
  for (const UnitPoint& p : points) {
    us.push_back(p.u);
    vs.push_back(p.v);
  }
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  const int mu = static_cast<int>(us.size());
  const int mv = static_cast<int>(vs.size());

  // cum[i][j] = points with u-rank < i and v-rank < j.
  std::vector<int> cum(static_cast<std::size_t>(mu + 1) * (mv + 1), 0);
  auto at = [&](int i, int j) -> int& { return cum[static_cast<std::size_t>(i) * (mv + 1) + j]; };
  for (const UnitPoint& p : points) {
    const int i = static_cast<int>(std::lower_bound(us.begin(), us.end(), p.u) - us.begin());
    const int j = static_cast<int>(std::lower_bound(vs.begin(), vs.end(), p.v) - vs.begin());
    at(i + 1, j + 1) += 1;
  }
  for (int i = 1; i <= mu; ++i)
    for (int j = 1; j <= mv; ++j) at(i, j) += at(i - 1, j) + at(i, j - 1) - at(i - 1, j - 1);
  // Points with u-rank in [ia, ib) and v-rank in [ja, jb).
  auto count = [&](int ia, int ib, int ja, int jb) {
    if (ia >= ib || ja >= jb) return 0;
    return at(ib, jb) - at(ia, jb) - at(ib, ja) + at(ia, ja);
  };

  double best = 0.0;

  // Over-full boxes: the tightest box around points from rank a..b, c..d. Its
  // upper edges sit just past the extreme points, so the area is approached
  // from above in the limit.
  for (int a = 0; a < mu; ++a)
    for (int b = a; b < mu; ++b) {
      const double du = us[b] - us[a];
      for (int c = 0; c < mv; ++c)
        for (int d = c; d < mv; ++d) {
          const double dev = count(a, b + 1, c, d + 1) / n - du * (vs[d] - vs[c]);
          best = std::max(best, dev);
        }
    }

  // Under-full boxes: the largest box whose edges are the domain boundary or
  // just exclude a point. Lower edge index -1 is the boundary 0; upper edge
  // index m is the boundary 1.
  for (int lo_u = -1; lo_u < mu; ++lo_u)
    for (int hi_u = std::max(lo_u, 0); hi_u <= mu; ++hi_u) {
      const double u0 = lo_u < 0 ? 0.0 : us[lo_u];
      const double u1 = hi_u == mu ? 1.0 : us[hi_u];
      if (!(u1 > u0)) continue;
      for (int lo_v = -1; lo_v < mv; ++lo_v)
        for (int hi_v = std::max(lo_v, 0); hi_v <= mv; ++hi_v) {
          const double v0 = lo_v < 0 ? 0.0 : vs[lo_v];
          const double v1 = hi_v == mv ? 1.0 : vs[hi_v];
          if (!(v1 > v0)) continue;
          const double area = (u1 - u0) * (v1 - v0);
          if (area >= 1.0) continue;
          const double dev = area - count(lo_u + 1, hi_u, lo_v + 1, hi_v) / n;
          best = std::max(best, dev);
        }
    }
  return best;
}

MetropolisResult metropolis_optimize(const SamplingPattern& pattern, double density, const MetropolisOptions& options) {
  if (!(options.cooling > 0.0 && options.cooling <= 1.0)) {
    throw Error(ErrorCode::InvalidSchedule, "cooling factor must lie in (0, 1]");
  }
  if (options.t0 && !(*options.t0 >= 0.0)) throw Error(ErrorCode::InvalidSchedule, "initial temperature must be >= 0");
  if (options.rectangles == 0) throw Error(ErrorCode::InvalidSchedule, "at least one rectangle required");

  const DensityPrefix start = prefix(pattern, density);
  const GridDims dims = pattern.dims();
  std::vector<Coord> current(start.points().begin(), start.points().end());
  if (current.empty()) throw Error(ErrorCode::EmptyPointSet, "nothing to optimize at this density");

  std::vector<bool> sampled(dims.cells(), false);
  for (const Coord& c : current) sampled[linear_index(dims, c)] = true;
  std::vector<Coord> free_cells;
  for (std::size_t i = 0; i < dims.cells(); ++i)
    if (!sampled[i]) free_cells.push_back(coord_of(dims, i));

  const auto boxes = random_rectangles(options.rectangles, options.seed);
  const double n = static_cast<double>(current.size());
  const double inv_boxes = 1.0 / static_cast<double>(boxes.size());
  auto to_unit = [&](const Coord& c) { return UnitPoint{(c.x + 0.5) / dims.width, (c.y + 0.5) / dims.height}; };

  std::vector<int> counts(boxes.size(), 0);
  for (const Coord& c : current) {
    const UnitPoint p = to_unit(c);
    for (std::size_t r = 0; r < boxes.size(); ++r) counts[r] += boxes[r].contains(p) ? 1 : 0;
  }
  auto measure_of = [&](const std::vector<int>& cnt) {
    double sum = 0.0;
    for (std::size_t r = 0; r < boxes.size(); ++r) sum += std::abs(cnt[r] / n - boxes[r].area());
    return sum * inv_boxes;
  };

  MetropolisResult result;
  double energy = measure_of(counts);
  result.initialMeasure = energy;
  result.bestMeasure = energy;
  std::vector<Coord> best = current;
  result.bestTrace.reserve(options.steps);

  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  double temperature = options.t0.value_or(energy);
  std::vector<int> trial(counts.size());

  for (std::size_t step = 0; step < options.steps && !free_cells.empty(); ++step) {
    const auto i = static_cast<std::size_t>(rng.below(current.size()));
    const auto j = static_cast<std::size_t>(rng.below(free_cells.size()));
    const UnitPoint out = to_unit(current[i]);
    const UnitPoint in = to_unit(free_cells[j]);
    for (std::size_t r = 0; r < boxes.size(); ++r) {
      trial[r] = counts[r] - (boxes[r].contains(out) ? 1 : 0) + (boxes[r].contains(in) ? 1 : 0);
    }
    const double proposed = measure_of(trial);
    const double delta = proposed - energy;
    // Draw unconditionally so the random stream does not depend on the outcome.
    const double u = rng.uniform();
    const bool accept = delta < 0.0 || (temperature > 0.0 && u < std::exp(-delta / temperature));
    if (accept) {
      std::swap(current[i], free_cells[j]);
      counts.swap(trial);
      energy = proposed;
      ++result.acceptedMoves;
      if (energy < result.bestMeasure) {
        result.bestMeasure = energy;
        best = current;
      }
    }
    result.bestTrace.push_back(result.bestMeasure);
    temperature *= options.cooling;
  }

  result.pattern = SamplingPattern(dims, std::move(best));
  return result;
}

}  // namespace sparsegrid
