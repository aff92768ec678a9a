#include "sparsegrid/delaunay.hpp"
#include "sparsegrid/error.hpp"
#include "sparsegrid/reconstruction.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace sparsegrid {

std::string_view to_string(Reconstructor r) { return r == Reconstructor::Lin ? "lin" : "fsr"; }

std::optional<Reconstructor> parse_reconstructor(std::string_view name) {
  if (name == "lin") return Reconstructor::Lin;
  if (name == "fsr") return Reconstructor::Fsr;
  return std::nullopt;
}

Raster<int> nearest_set_pixel(const Bitmap& mask) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  Raster<int> nearest = Raster<int>::Constant(h, w, -1);
  if (!mask.any()) return nearest;

  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  // Column pass: squared vertical distance and row of the nearest set pixel.
  Raster<long> col_d2(h, w);
  Raster<int> col_src(h, w);
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (mask(y, x)) last = y;
      col_src(y, x) = last;
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (mask(y, x)) last = y;
      const int up = col_src(y, x);
      int best = up;
      if (last >= 0 && (up < 0 || last - y < y - up)) best = last;
      col_src(y, x) = best;
      col_d2(y, x) = best < 0 ? kInf : static_cast<long>(best - y) * (best - y);
    }
  }

  // Row pass: lower envelope of parabolas (x - q)^2 + col_d2(q).
  std::vector<int> hull_q(w);
  std::vector<double> hull_z(w + 1);
  for (int y = 0; y < h; ++y) {
    int k = -1;
    for (int q = 0; q < w; ++q) {
      const long fq = col_d2(y, q);
      if (fq >= kInf) continue;
      double s = 0.0;
      while (k >= 0) {
        const int p = hull_q[k];
        s = (static_cast<double>(fq + static_cast<long>(q) * q) - static_cast<double>(col_d2(y, p) + static_cast<long>(p) * p)) /
            (2.0 * (q - p));
        if (s <= hull_z[k]) {
          --k;
        } else {
          break;
        }
      }
      ++k;
      hull_q[k] = q;
      hull_z[k] = k == 0 ? -std::numeric_limits<double>::infinity() : s;
      hull_z[k + 1] = std::numeric_limits<double>::infinity();
    }
    int j = 0;
    for (int x = 0; x < w; ++x) {
      while (hull_z[j + 1] < x) ++j;
      const int q = hull_q[j];
      nearest(y, x) = col_src(y, q) * w + q;
    }
  }
  return nearest;
}

GrayImage lin_reconstruct(const SampledImage& sampled) {
  const GridDims dims = sampled.dims();
  if (dims_of(sampled.mask) != dims) throw Error(ErrorCode::DimsMismatch, "mask and values differ in size");
  if (sampled.mask.all()) return sampled.values;

  std::vector<Coord> points;
  std::vector<double> values;
  for (int y = 0; y < dims.height; ++y)
    for (int x = 0; x < dims.width; ++x)
      if (sampled.mask(y, x)) {
        points.push_back({x, y});
        values.push_back(sampled.values(y, x));
      }

  const DelaunayTriangulation dt(points);

  GrayImage out = GrayImage::Zero(dims.height, dims.width);
  Bitmap done = sampled.mask;
  for (const auto& tri : dt.triangles()) {
    const Coord& a = points[tri[0]];
    const Coord& b = points[tri[1]];
    const Coord& c = points[tri[2]];
    const double area = static_cast<double>(orient2d(a, b, c));
    const double fa = values[tri[0]], fb = values[tri[1]], fc = values[tri[2]];
    const int x0 = std::min({a.x, b.x, c.x}), x1 = std::max({a.x, b.x, c.x});
    const int y0 = std::min({a.y, b.y, c.y}), y1 = std::max({a.y, b.y, c.y});
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        if (done(y, x)) continue;
        const Coord p{x, y};
        const std::int64_t wa = orient2d(b, c, p);
        const std::int64_t wb = orient2d(c, a, p);
        const std::int64_t wc = orient2d(a, b, p);
        if (wa < 0 || wb < 0 || wc < 0) continue;
        out(y, x) = (static_cast<double>(wa) * fa + static_cast<double>(wb) * fb + static_cast<double>(wc) * fc) / area;
        done(y, x) = true;
      }
  }

  if (!done.all()) {
    const Raster<int> nearest = nearest_set_pixel(sampled.mask);
    for (int y = 0; y < dims.height; ++y)
      for (int x = 0; x < dims.width; ++x)
        if (!done(y, x)) out(y, x) = sampled.values.data()[nearest(y, x)];
  }
  for (std::size_t i = 0; i < points.size(); ++i) out(points[i].y, points[i].x) = values[i];
  return out;
}

}  // namespace sparsegrid
