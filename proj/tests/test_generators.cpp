#include "sparsegrid/discrepancy.hpp"
#include "sparsegrid/error.hpp"
#include "sparsegrid/generators.hpp"
#include "sparsegrid/probability_field.hpp"
#include "sparsegrid/sobol.hpp"
#include "sparsegrid/sum_tree.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>
#include <set>

using namespace sparsegrid;

namespace {

void check_valid(const SamplingPattern& p, std::size_t count) {
  REQUIRE(p.size() == count);
  std::set<Coord> seen;
  for (const Coord& c : p.points()) {
    REQUIRE(in_bounds(p.dims(), c));
    REQUIRE(seen.insert(c).second);
  }
}

double chi2_uniform(const std::vector<long>& hist) {
  long total = 0;
  for (long h : hist) total += h;
  const double expected = double(total) / hist.size();
  double chi2 = 0;
  for (long h : hist) chi2 += (h - expected) * (h - expected) / expected;
  return chi2;
}

double chi2_critical(std::size_t dof, double alpha) {
  return boost::math::quantile(boost::math::chi_squared(static_cast<double>(dof)), 1.0 - alpha);
}

double min_pair_distance(const SamplingPattern& p) {
  double best = 1e300;
  const auto pts = p.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      best = std::min(best, dx * dx + dy * dy);
    }
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("pattern type names") {
  for (PatternType t : {PatternType::Rand, PatternType::Sobol, PatternType::Gauss}) {
    CHECK(parse_pattern_type(to_string(t)) == t);
  }
  CHECK_FALSE(parse_pattern_type("uniform"));
}

TEST_CASE("all generators emit valid, deterministic patterns") {
  const GridDims dims{31, 17};
  for (PatternType t : {PatternType::Rand, PatternType::Sobol, PatternType::Gauss}) {
    CAPTURE(to_string(t));
    const SamplingPattern a = generate(t, dims, 300, 5);
    check_valid(a, 300);
    CHECK(generate(t, dims, 300, 5) == a);
    // A shorter request is a prefix of a longer one.
    const SamplingPattern b = generate(t, dims, 120, 5);
    for (std::size_t i = 0; i < b.size(); ++i) REQUIRE(b.points()[i] == a.points()[i]);
    CHECK_THROWS_AS(generate(t, dims, dims.cells() + 1, 5), Error);
    try {
      generate(t, dims, dims.cells() + 1, 5);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CountTooLarge);
    }
  }
  CHECK(generate(PatternType::Sobol, dims, 300, 1) == generate(PatternType::Sobol, dims, 300, 99));
  CHECK_FALSE(generate(PatternType::Rand, dims, 300, 1) == generate(PatternType::Rand, dims, 300, 2));
  CHECK_FALSE(generate(PatternType::Gauss, dims, 300, 1) == generate(PatternType::Gauss, dims, 300, 2));
}

TEST_CASE("full-count patterns are permutations of the grid") {
  const GridDims dims{16, 12};
  check_valid(gen_rand(dims, dims.cells(), 3), dims.cells());
  check_valid(gen_gauss(dims, dims.cells(), 3), dims.cells());
  check_valid(gen_sobol({64, 64}, 64 * 64), 64 * 64);
}

TEST_CASE("rand: first point is uniform over seeds") {
  const GridDims dims{4, 4};
  std::vector<long> hist(dims.cells(), 0);
  for (RngSeed s = 0; s < 100000; ++s) ++hist[linear_index(dims, gen_rand(dims, 1, s).points()[0])];
  CHECK(chi2_uniform(hist) < chi2_critical(hist.size() - 1, 0.01));
}

TEST_CASE("rand: later points are uniform over the unsampled cells") {
  const GridDims dims{4, 4};
  std::vector<long> hist(dims.cells() - 1, 0);
  for (RngSeed s = 0; s < 50000; ++s) {
    const SamplingPattern p = gen_rand(dims, 2, s);
    const std::size_t first = linear_index(dims, p.points()[0]);
    std::size_t second = linear_index(dims, p.points()[1]);
    // Rank the second point among the cells other than the first.
    if (second > first) --second;
    ++hist[second];
  }
  CHECK(chi2_uniform(hist) < chi2_critical(hist.size() - 1, 0.01));
}

TEST_CASE("sobol: first cells follow the shifted sequence") {
  // On a 2x2 grid the first 16 points are skipped; the next ones give these cells.
  const SamplingPattern p = gen_sobol({2, 2}, 4);
  std::set<Coord> cells(p.points().begin(), p.points().end());
  CHECK(cells.size() == 4);
  const auto s = Sobol2D::at(16);
  CHECK(p.points()[0] == Coord{static_cast<int>(s[0] >> 31), static_cast<int>(s[1] >> 31)});
}

TEST_CASE("sobol: lower discrepancy than random") {
  const GridDims dims{100, 100};
  const auto sobol = gen_sobol(dims, 1000);
  const double ds = estimate_discrepancy(to_unit_points(prefix_of_count(sobol, 1000)), 20000, 1).meanAbsDeviation;
  double dr = 0;
  for (RngSeed s = 1; s <= 10; ++s) {
    const auto r = gen_rand(dims, 1000, s);
    dr += estimate_discrepancy(to_unit_points(prefix_of_count(r, 1000)), 20000, 1).meanAbsDeviation / 10;
  }
  CHECK(ds < dr);
}

TEST_CASE("gauss parameters") {
  const GaussParams p;
  const double expect = std::pow(1.0 - std::exp(-1.0), 7.0);
  CHECK(p.factor(2.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(p.factor(2.0) == doctest::Approx(0.0403273).epsilon(1e-6));
  CHECK(p.factor(0.0) == 0.0);
  CHECK(1.0 - p.factor(std::sqrt(145.0)) < 1e-12);
  CHECK_NOTHROW(p.validate());
  GaussParams bad = p;
  bad.cutoffRadius = 3;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.tau = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.sigmaScale = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("probability field updates") {
  ProbabilityField f({10, 10});
  CHECK(f.total_weight() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(f.remaining() == 100);
  f.update({4, 5});
  CHECK(f.weight({4, 5}) == 0.0);
  CHECK(std::isinf(f.log_weight({4, 5})));
  CHECK(f.is_drawn({4, 5}));
  CHECK(f.weight({6, 5}) == doctest::Approx(GaussParams{}.factor(2.0)).epsilon(1e-12));
  CHECK(f.weight({4, 3}) == doctest::Approx(GaussParams{}.factor(2.0)).epsilon(1e-12));
  CHECK(f.weight({5, 6}) == doctest::Approx(GaussParams{}.factor(std::sqrt(2.0))).epsilon(1e-12));
  CHECK_THROWS_AS(f.update({4, 5}), Error);
  try {
    f.update({4, 5});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadySampled);
  }

  // Beyond the cutoff radius nothing changes.
  ProbabilityField g({40, 1});
  g.update({0, 0});
  CHECK(g.log_weight({13, 0}) == 0.0);
  CHECK(g.log_weight({12, 0}) < 0.0);
}

TEST_CASE("probability field bookkeeping stays exact") {
  const GridDims dims{30, 30};
  ProbabilityField f(dims);
  Rng rng(4);
  for (int i = 0; i < 600; ++i) {
    auto c = f.sample(rng.uniform());
    REQUIRE(c);
    REQUIRE_FALSE(f.is_drawn(*c));
    f.update(*c);
    if (i % 50 == 0) {
      double sum = 0;
      for (int y = 0; y < dims.height; ++y)
        for (int x = 0; x < dims.width; ++x) {
          const double lw = f.log_weight({x, y});
          REQUIRE(lw <= 0.0);
          sum += std::exp(lw);
        }
      CHECK(std::abs(f.total_weight() - sum) <= 1e-9 * sum);
    }
  }
  CHECK(f.remaining() == 300);
}

TEST_CASE("sum tree never picks an empty leaf") {
  SumTree<double> t(7, 0.0);
  t.set(3, 2.0);
  t.set(5, 1.0);
  CHECK(t.total() == 3.0);
  CHECK(t.find(0.0) == 3);
  CHECK(t.find(1.999) == 3);
  CHECK(t.find(2.0) == 5);
  CHECK(t.find(2.9999) == 5);
  // Rounding can push the target to the total; still a non-empty leaf.
  CHECK(t.find(3.0) == 5);
}

TEST_CASE("fresh field draws are uniform") {
  const ProbabilityField f({5, 5});
  Rng rng(8);
  std::vector<long> hist(25, 0);
  for (int i = 0; i < 100000; ++i) ++hist[linear_index(f.dims(), *f.sample(rng.uniform()))];
  CHECK(chi2_uniform(hist) < chi2_critical(24, 0.01));
}

TEST_CASE("conditional draws follow the product distribution") {
  const GridDims dims{8, 8};
  const std::vector<Coord> prior{{1, 1}, {5, 2}, {3, 6}};
  ProbabilityField f(dims);
  for (const Coord& c : prior) f.update(c);

  const GaussParams gp;
  std::vector<double> p(dims.cells(), 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Coord q = coord_of(dims, i);
    for (const Coord& c : prior) p[i] *= std::pow(1.0 - std::exp(-((q.x - c.x) * (q.x - c.x) + (q.y - c.y) * (q.y - c.y)) / 4.0), 7.0);
  }
  double z = 0;
  for (double v : p) z += v;

  constexpr long kDraws = 200000;
  Rng rng(99);
  std::vector<long> hist(dims.cells(), 0);
  for (long i = 0; i < kDraws; ++i) ++hist[linear_index(dims, *f.sample(rng.uniform()))];
  double chi2 = 0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = kDraws * p[i] / z;
    if (p[i] == 0) {
      CHECK(hist[i] == 0);
      continue;
    }
    chi2 += (hist[i] - e) * (hist[i] - e) / e;
    ++bins;
  }
  CHECK(chi2 < chi2_critical(bins - 1, 0.01));
}

TEST_CASE("gauss spreads points further apart than rand") {
  const GridDims dims{100, 100};
  double g = 0, r = 0;
  for (RngSeed s = 1; s <= 10; ++s) {
    g += min_pair_distance(gen_gauss(dims, 1000, s));
    r += min_pair_distance(gen_rand(dims, 1000, s));
  }
  CHECK(g > r);
}

TEST_CASE("gauss falls back to uniform draws when every weight underflows") {
  GaussParams steep;
  steep.tau = 1000;
  const GridDims dims{16, 16};
  GaussStats stats;
  const SamplingPattern p = gen_gauss(dims, dims.cells(), 2, steep, &stats);
  check_valid(p, dims.cells());
  CHECK(stats.fallbackDraws > 0);
  CHECK(gen_gauss(dims, dims.cells(), 2, steep) == p);

  steep.uniformFallback = false;
  try {
    gen_gauss(dims, dims.cells(), 2, steep);
    FAIL("expected DegenerateField");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateField);
  }

  GaussStats plain;
  gen_gauss(dims, 100, 2, GaussParams{}, &plain);
  CHECK(plain.fallbackDraws == 0);
}
