#include "sparsegrid/delaunay.hpp"
#include "sparsegrid/error.hpp"
#include "sparsegrid/generators.hpp"
#include "sparsegrid/raster.hpp"
#include "sparsegrid/reconstruction.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sparsegrid;

namespace {

// Andrew's monotone chain; returns twice the hull area and the number of
// points on the hull boundary (collinear ones included).
std::pair<std::int64_t, std::size_t> hull_stats(std::vector<Coord> pts) {
  std::sort(pts.begin(), pts.end(), [](const Coord& a, const Coord& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  std::vector<Coord> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient2d(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient2d(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  std::int64_t area2 = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Coord& a = h[i];
    const Coord& b = h[(i + 1) % h.size()];
    area2 += static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(b.x) * a.y;
  }
  std::size_t on_boundary = 0;
  for (const Coord& p : pts) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Coord& a = h[i];
      const Coord& b = h[(i + 1) % h.size()];
      if (orient2d(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
          std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y)) {
        ++on_boundary;
        break;
      }
    }
  }
  return {area2, on_boundary};
}

void check_delaunay(const std::vector<Coord>& pts, bool check_empty_circles) {
  const DelaunayTriangulation dt(pts);
  const auto [area2, boundary] = hull_stats(pts);
  std::int64_t sum = 0;
  std::set<std::pair<int, int>> edges;
  for (const auto& t : dt.triangles()) {
    const std::int64_t o = orient2d(pts[t[0]], pts[t[1]], pts[t[2]]);
    REQUIRE(o > 0);
    sum += o;
    for (int i = 0; i < 3; ++i) REQUIRE(edges.insert({t[i], t[(i + 1) % 3]}).second);
    if (check_empty_circles) {
      for (const Coord& p : pts) REQUIRE(incircle_sign(pts[t[0]], pts[t[1]], pts[t[2]], p) <= 0);
    }
  }
  CHECK(sum == area2);
  CHECK(dt.triangles().size() == 2 * pts.size() - 2 - boundary);
  CHECK(dt.hull_vertices().size() == boundary);
}

std::vector<Coord> points_of(const SamplingPattern& p) { return {p.points().begin(), p.points().end()}; }

}  // namespace

TEST_CASE("exact predicates") {
  CHECK(orient2d({0, 0}, {1, 0}, {0, 1}) > 0);
  CHECK(orient2d({0, 0}, {0, 1}, {1, 0}) < 0);
  CHECK(orient2d({0, 0}, {2, 2}, {5, 5}) == 0);
  CHECK(incircle_sign({0, 0}, {2, 0}, {0, 2}, {1, 1}) > 0);
  CHECK(incircle_sign({0, 0}, {2, 0}, {0, 2}, {2, 2}) == 0);
  CHECK(incircle_sign({0, 0}, {2, 0}, {0, 2}, {3, 3}) < 0);
  const int big = (1 << 29) - 1;
  CHECK(incircle_sign({0, 0}, {big, 0}, {0, big}, {big, big}) == 0);
  CHECK(incircle_sign({0, 0}, {big, 0}, {0, big}, {big - 1, big - 1}) > 0);
}

TEST_CASE("triangulation of random point sets") {
  for (RngSeed s = 1; s <= 30; ++s) {
    CAPTURE(s);
    check_delaunay(points_of(gen_rand({20, 15}, 3 + s * 3, s)), true);
  }
}

TEST_CASE("triangulation of degenerate lattices") {
  // Full grids are maximally cocircular and have long collinear hull edges.
  for (int w = 2; w <= 9; ++w) {
    std::vector<Coord> pts;
    for (int y = 0; y < w + 1; ++y)
      for (int x = 0; x < w; ++x) pts.push_back({x, y});
    check_delaunay(pts, true);
  }
  check_delaunay(points_of(gen_sobol({64, 64}, 1500)), false);
  check_delaunay(points_of(gen_rand({128, 128}, 6000, 3)), false);
  // A line plus one point off it.
  std::vector<Coord> fan;
  for (int x = 0; x < 20; ++x) fan.push_back({x, 0});
  fan.push_back({7, 5});
  check_delaunay(fan, true);
}

TEST_CASE("triangulation rejects degenerate input") {
  auto code = [](std::vector<Coord> pts) {
    try {
      DelaunayTriangulation dt(pts);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  CHECK(code({{0, 0}, {1, 1}}) == ErrorCode::DegenerateGeometry);
  CHECK(code({{0, 0}, {1, 1}, {2, 2}, {5, 5}}) == ErrorCode::DegenerateGeometry);
  CHECK(code({{0, 0}, {1, 0}, {0, 1}, {1, 0}}) == ErrorCode::DuplicatePoint);
}

TEST_CASE("reconstructor names") {
  CHECK(parse_reconstructor("lin") == Reconstructor::Lin);
  CHECK(parse_reconstructor("fsr") == Reconstructor::Fsr);
  CHECK_FALSE(parse_reconstructor("cubic"));
  CHECK(to_string(Reconstructor::Fsr) == "fsr");
}

TEST_CASE("nearest sampled pixel") {
  Bitmap m = Bitmap::Constant(5, 7, false);
  m(0, 0) = true;
  m(4, 6) = true;
  const Raster<int> near = nearest_set_pixel(m);
  CHECK(near(0, 1) == 0);
  CHECK(near(4, 5) == 4 * 7 + 6);
  CHECK(near(1, 1) == 0);
  CHECK(near(3, 5) == 4 * 7 + 6);
  // Compare against brute force on a random mask.
  const SamplingPattern p = gen_rand({23, 17}, 12, 5);
  const Bitmap mask = to_bitmap(prefix_of_count(p, 12));
  const Raster<int> got = nearest_set_pixel(mask);
  for (int y = 0; y < 17; ++y)
    for (int x = 0; x < 23; ++x) {
      long best = 1L << 40;
      for (const Coord& c : p.points()) best = std::min(best, long(c.x - x) * (c.x - x) + long(c.y - y) * (c.y - y));
      const int gx = got(y, x) % 23, gy = got(y, x) / 23;
      REQUIRE(mask(gy, gx));
      REQUIRE(long(gx - x) * (gx - x) + long(gy - y) * (gy - y) == best);
    }
}

TEST_CASE("lin is exact on affine functions inside the hull") {
  const GridDims dims{64, 48};
  GrayImage plane(dims.height, dims.width);
  for (int y = 0; y < dims.height; ++y)
    for (int x = 0; x < dims.width; ++x) plane(y, x) = 2.0 * x + 3.0 * y + 1.0;
  const SamplingPattern p = gen_rand(dims, density_to_count(dims, 0.1), 6);
  const SampledImage s = apply_mask(plane, prefix(p, 0.1));
  const GrayImage out = lin_reconstruct(s);

  const std::vector<Coord> pts = points_of(p);
  const DelaunayTriangulation dt(pts);
  double worst = 0;
  for (const auto& t : dt.triangles()) {
    for (int y = 0; y < dims.height; ++y)
      for (int x = 0; x < dims.width; ++x) {
        const Coord q{x, y};
        if (orient2d(pts[t[0]], pts[t[1]], q) >= 0 && orient2d(pts[t[1]], pts[t[2]], q) >= 0 &&
            orient2d(pts[t[2]], pts[t[0]], q) >= 0) {
          worst = std::max(worst, std::abs(out(y, x) - plane(y, x)));
        }
      }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("lin edge cases") {
  const GridDims dims{16, 16};
  GrayImage img(16, 16);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<double>((i * 29) % 256);

  const SamplingPattern full = gen_rand(dims, dims.cells(), 2);
  CHECK((lin_reconstruct(apply_mask(img, prefix(full, 1.0))) == img).all());
  CHECK((quantize8(lin_reconstruct(apply_mask(img, prefix(full, 1.0)))) == img).all());

  const SamplingPattern three(dims, {{2, 3}, {12, 4}, {7, 13}});
  const GrayImage zero = lin_reconstruct(apply_mask(GrayImage::Zero(16, 16), prefix_of_count(three, 3)));
  CHECK((zero == 0.0).all());

  // Sampled pixels keep their values, everything is defined.
  const SamplingPattern sparse = gen_rand(dims, 30, 4);
  const SampledImage s = apply_mask(img, prefix_of_count(sparse, 30));
  const GrayImage out = lin_reconstruct(s);
  for (const Coord& c : sparse.points()) CHECK(out(c.y, c.x) == img(c.y, c.x));
  CHECK(out.allFinite());
  CHECK(out.minCoeff() >= 0.0);
  CHECK(out.maxCoeff() <= 255.0);

  const SamplingPattern line(dims, {{1, 1}, {2, 2}, {3, 3}});
  CHECK_THROWS_AS(lin_reconstruct(apply_mask(img, prefix_of_count(line, 3))), Error);
}
