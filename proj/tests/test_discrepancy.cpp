#include "sparsegrid/discrepancy.hpp"
#include "sparsegrid/error.hpp"
#include "sparsegrid/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sparsegrid;

namespace {

// Independent brute force: every box with edges at 0, 1 or a point coordinate,
// each edge open or closed. The supremum over half-open boxes is attained in
// the limit by one of these.
double brute_force_discrepancy(const std::vector<UnitPoint>& pts) {
  std::vector<double> us{0.0, 1.0}, vs{0.0, 1.0};
  for (const auto& p : pts) {
    us.push_back(p.u);
    vs.push_back(p.v);
  }
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  const double n = static_cast<double>(pts.size());
  double best = 0;
  for (double u0 : us)
    for (double u1 : us) {
      if (u1 < u0) continue;
      for (double v0 : vs)
        for (double v1 : vs) {
          if (v1 < v0) continue;
          const double area = (u1 - u0) * (v1 - v0);
          for (int closed = 0; closed < 16; ++closed) {
            // Degenerate boxes only make sense fully closed (a point or segment).
            if ((u1 == u0 || v1 == v0) && closed != 15) continue;
            int inside = 0;
            for (const auto& p : pts) {
              const bool in_u = ((closed & 1) ? p.u >= u0 : p.u > u0) && ((closed & 2) ? p.u <= u1 : p.u < u1);
              const bool in_v = ((closed & 4) ? p.v >= v0 : p.v > v0) && ((closed & 8) ? p.v <= v1 : p.v < v1);
              inside += in_u && in_v;
            }
            best = std::max(best, std::abs(inside / n - area));
          }
        }
    }
  return best;
}

std::vector<UnitPoint> random_points(GridDims dims, std::size_t n, RngSeed seed) {
  return to_unit_points(prefix_of_count(gen_rand(dims, n, seed), n));
}

}  // namespace

TEST_CASE("unit mapping uses cell centers") {
  const SamplingPattern p({4, 2}, {{0, 0}, {3, 1}});
  const auto u = to_unit_points(prefix_of_count(p, 2));
  CHECK(u[0].u == 0.125);
  CHECK(u[0].v == 0.25);
  CHECK(u[1].u == 0.875);
  CHECK(u[1].v == 0.75);
}

TEST_CASE("exact discrepancy of small configurations") {
  // A single point: a vanishing box around it holds all mass.
  CHECK(exact_discrepancy(std::vector<UnitPoint>{{0.5, 0.5}}) == doctest::Approx(1.0));
  // 2x2 cell centres: the closed box [1/4, 3/4]^2 holds everything with area 1/4.
  const std::vector<UnitPoint> grid{{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
  CHECK(exact_discrepancy(grid) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(exact_discrepancy(std::vector<UnitPoint>{}) == 0.0);
}

TEST_CASE("exact discrepancy matches brute force") {
  for (RngSeed s = 1; s <= 40; ++s) {
    const std::size_t n = 1 + s % 9;
    const auto pts = random_points({8, 6}, n, s);
    CAPTURE(s);
    CHECK(exact_discrepancy(pts) == doctest::Approx(brute_force_discrepancy(pts)).epsilon(1e-12));
  }
}

TEST_CASE("exact discrepancy point limit") {
  const auto pts = random_points({32, 32}, 257, 1);
  try {
    exact_discrepancy(pts);
    FAIL("expected TooManyPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyPoints);
  }
  CHECK_NOTHROW(exact_discrepancy(std::span(pts).first(256)));
}

TEST_CASE("estimator never exceeds the exact value") {
  for (RngSeed s = 1; s <= 10; ++s) {
    const auto pts = random_points({16, 16}, 5 + 5 * s, s);
    const DiscrepancyReport r = estimate_discrepancy(pts, 20000, s);
    const double exact = exact_discrepancy(pts);
    CHECK(r.supEstimate <= exact + 1e-12);
    CHECK(r.supEstimate > 0.5 * exact);
    CHECK(r.meanAbsDeviation <= r.supEstimate);
    CHECK(r.rectanglesTested == 20000);
    CHECK(r.seed == s);
  }
}

TEST_CASE("estimator is deterministic and validates input") {
  const auto pts = random_points({16, 16}, 30, 3);
  const auto a = estimate_discrepancy(pts, 1000, 7);
  const auto b = estimate_discrepancy(pts, 1000, 7);
  CHECK(a.supEstimate == b.supEstimate);
  CHECK(a.meanAbsDeviation == b.meanAbsDeviation);
  CHECK_THROWS_AS(estimate_discrepancy(std::vector<UnitPoint>{}, 10, 1), Error);
  CHECK_THROWS_AS(estimate_discrepancy(pts, 0, 1), Error);
}

TEST_CASE("random rectangles lie in the unit square") {
  for (const RectQuery& r : random_rectangles(10000, 5)) {
    REQUIRE(r.u0 >= 0.0);
    REQUIRE(r.u0 < r.u1);
    REQUIRE(r.u1 < 1.0);
    REQUIRE(r.v0 >= 0.0);
    REQUIRE(r.v0 < r.v1);
    REQUIRE(r.v1 < 1.0);
  }
}

TEST_CASE("box deviation counts half-open membership") {
  const std::vector<UnitPoint> pts{{0.25, 0.25}, {0.5, 0.5}};
  CHECK(box_deviation(pts, {0.25, 0.25, 0.5, 0.5}) == doctest::Approx(0.5 - 0.0625));
  CHECK(box_deviation(pts, {0.0, 0.0, 1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("metropolis lowers the measure and keeps the pattern valid") {
  const SamplingPattern start = gen_rand({50, 50}, 2500, 4);
  MetropolisOptions opt;
  opt.steps = 3000;
  opt.rectangles = 500;
  const MetropolisResult r = metropolis_optimize(start, 0.06, opt);
  CHECK(r.pattern.size() == 150);
  std::set<Coord> seen(r.pattern.points().begin(), r.pattern.points().end());
  CHECK(seen.size() == 150);
  CHECK(r.bestMeasure <= r.initialMeasure);
  CHECK(r.bestMeasure < r.initialMeasure);
  CHECK_FALSE(r.incremental);
  REQUIRE(r.bestTrace.size() == opt.steps);
  for (std::size_t i = 1; i < r.bestTrace.size(); ++i) REQUIRE(r.bestTrace[i] <= r.bestTrace[i - 1]);
  CHECK(r.bestTrace.back() == r.bestMeasure);

  const MetropolisResult again = metropolis_optimize(start, 0.06, opt);
  CHECK(again.pattern == r.pattern);
}

TEST_CASE("metropolis schedule edge cases") {
  const SamplingPattern start = gen_rand({20, 20}, 400, 2);
  MetropolisOptions opt;
  opt.steps = 0;
  const MetropolisResult r = metropolis_optimize(start, 0.1, opt);
  const DensityPrefix p = prefix(start, 0.1);
  CHECK(std::equal(r.pattern.points().begin(), r.pattern.points().end(), p.points().begin(), p.points().end()));
  CHECK(r.bestMeasure == r.initialMeasure);

  // A zero temperature only ever accepts improvements.
  opt.steps = 500;
  opt.t0 = 0.0;
  const MetropolisResult greedy = metropolis_optimize(start, 0.1, opt);
  CHECK(greedy.bestMeasure <= greedy.initialMeasure);

  auto code = [&](MetropolisOptions o) {
    try {
      metropolis_optimize(start, 0.1, o);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  MetropolisOptions bad;
  bad.cooling = 0.0;
  CHECK(code(bad) == ErrorCode::InvalidSchedule);
  bad.cooling = 1.5;
  CHECK(code(bad) == ErrorCode::InvalidSchedule);
  bad = {};
  bad.t0 = -1.0;
  CHECK(code(bad) == ErrorCode::InvalidSchedule);
  bad = {};
  bad.rectangles = 0;
  CHECK(code(bad) == ErrorCode::InvalidSchedule);
}

TEST_CASE("a full grid is nearly uniform") {
  const GridDims dims{100, 100};
  const auto pts = to_unit_points(prefix_of_count(gen_rand(dims, dims.cells(), 1), dims.cells()));
  const DiscrepancyReport r = estimate_discrepancy(pts, 100000, 2);
  CHECK(r.supEstimate < 0.03);
}

TEST_CASE("sobol and gauss are more uniform than rand") {
  const GridDims dims{100, 100};
  double rand = 0, sobol = 0, gauss = 0;
  auto measure = [&](const SamplingPattern& p) {
    return estimate_discrepancy(to_unit_points(prefix(p, 0.1)), 20000, 3).meanAbsDeviation / 5;
  };
  for (RngSeed s = 1; s <= 5; ++s) {
    rand += measure(gen_rand(dims, 1000, s));
    sobol += measure(gen_sobol(dims, 1000));
    gauss += measure(gen_gauss(dims, 1000, s));
  }
  CHECK(gauss < rand);
  CHECK(sobol < rand);
}
