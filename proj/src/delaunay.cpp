#include "sparsegrid/delaunay.hpp"

#include "sparsegrid/error.hpp"

#include <algorithm>
#include <numeric>

namespace sparsegrid {

std::int64_t orient2d(const Coord& a, const Coord& b, const Coord& c) {
  return (static_cast<std::int64_t>(b.x) - a.x) * (static_cast<std::int64_t>(c.y) - a.y) -
         (static_cast<std::int64_t>(b.y) - a.y) * (static_cast<std::int64_t>(c.x) - a.x);
}

int incircle_sign(const Coord& a, const Coord& b, const Coord& c, const Coord& d) {
  using Wide = __int128;
  const Wide adx = a.x - d.x, ady = a.y - d.y;
  const Wide bdx = b.x - d.x, bdy = b.y - d.y;
  const Wide cdx = c.x - d.x, cdy = c.y - d.y;
  const Wide alift = adx * adx + ady * ady;
  const Wide blift = bdx * bdx + bdy * bdy;
  const Wide clift = cdx * cdx + cdy * cdy;
  const Wide det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

namespace {

std::uint64_t hilbert_key(std::uint32_t x, std::uint32_t y, int order) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - (x & (s - 1)) + (x & ~(s - 1));
        y = s - 1 - (y & (s - 1)) + (y & ~(s - 1));
      }
      std::swap(x, y);
    }
  }
  return d;
}

bool strictly_between(const Coord& p, const Coord& q, const Coord& x) {
  // x is known collinear with p and q.
  if (p.x != q.x) return (x.x > std::min(p.x, q.x)) && (x.x < std::max(p.x, q.x));
  return (x.y > std::min(p.y, q.y)) && (x.y < std::max(p.y, q.y));
}

}  // namespace

bool DelaunayTriangulation::is_ghost(int t) const {
  const auto& v = tris_[t].v;
  return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost;
}

bool DelaunayTriangulation::in_circumcircle(int t, const Coord& x) const {
  const auto& v = tris_[t].v;
  for (int k = 0; k < 3; ++k) {
    if (v[k] != kGhost) continue;
    // Ghost (p, q, inf): the "circle" is the open half-plane left of p->q plus
    // the open segment pq itself.
    const Coord& p = points_[v[(k + 1) % 3]];
    const Coord& q = points_[v[(k + 2) % 3]];
    const std::int64_t o = orient2d(p, q, x);
    return o > 0 || (o == 0 && strictly_between(p, q, x));
  }
  return incircle_sign(points_[v[0]], points_[v[1]], points_[v[2]], x) > 0;
}

int DelaunayTriangulation::new_triangle(const std::array<int, 3>& v) {
  int t;
  if (!free_.empty()) {
    t = free_.back();
    free_.pop_back();
    tris_[t] = Tri{v, {-1, -1, -1}};
    alive_[t] = true;
  } else {
    t = static_cast<int>(tris_.size());
    tris_.push_back(Tri{v, {-1, -1, -1}});
    alive_.push_back(true);
    visit_stamp_.push_back(0);
    cavity_stamp_.push_back(0);
  }
  return t;
}

int DelaunayTriangulation::locate(const Coord& x, int t) const {
  if (is_ghost(t)) {
    const auto& g = tris_[t];
    for (int k = 0; k < 3; ++k)
      if (g.v[k] == kGhost) t = g.n[k];
  }
  // Visibility walk; rotating the first edge tested keeps it from cycling.
  const std::size_t limit = 4 * tris_.size() + 16;
  for (std::size_t step = 0; step < limit; ++step) {
    if (is_ghost(t)) return t;
    const Tri& tri = tris_[t];
    const unsigned start = walk_counter_++ % 3;
    bool moved = false;
    for (unsigned k = 0; k < 3; ++k) {
      const unsigned i = (start + k) % 3;
      if (orient2d(points_[tri.v[(i + 1) % 3]], points_[tri.v[(i + 2) % 3]], x) < 0) {
        t = tri.n[i];
        moved = true;
        break;
      }
    }
    if (!moved) return t;
  }
  throw Error(ErrorCode::DegenerateGeometry, "point location did not terminate");
}

void DelaunayTriangulation::insert(int vertex) {
  const Coord& x = points_[vertex];
  const int seed = locate(x, last_);

  ++stamp_;
  std::vector<int> cavity{seed};
  visit_stamp_[seed] = stamp_;
  cavity_stamp_[seed] = stamp_;
  for (std::size_t k = 0; k < cavity.size(); ++k) {
    const Tri& tri = tris_[cavity[k]];
    for (int nb : tri.n) {
      if (visit_stamp_[nb] == stamp_) continue;
      visit_stamp_[nb] = stamp_;
      if (in_circumcircle(nb, x)) {
        cavity_stamp_[nb] = stamp_;
        cavity.push_back(nb);
      }
    }
  }

  struct BoundaryEdge {
    int a, b, outer, old;
  };
  std::vector<BoundaryEdge> boundary;
  for (int t : cavity) {
    const Tri& tri = tris_[t];
    for (int i = 0; i < 3; ++i) {
      const int nb = tri.n[i];
      if (cavity_stamp_[nb] == stamp_) continue;
      boundary.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], nb, t});
    }
  }
  // Each boundary vertex starts exactly one boundary edge.
  std::vector<std::pair<int, int>> by_start;  // (start vertex, new triangle)
  std::vector<std::pair<int, int>> by_end;
  by_start.reserve(boundary.size());
  by_end.reserve(boundary.size());
  std::vector<int> created;
  created.reserve(boundary.size());
  for (const BoundaryEdge& e : boundary) {
    const int t = new_triangle({e.a, e.b, vertex});
    tris_[t].n[2] = e.outer;
    for (int& back : tris_[e.outer].n)
      if (back == e.old) back = t;
    by_start.emplace_back(e.a, t);
    by_end.emplace_back(e.b, t);
    created.push_back(t);
  }
  auto find = [](const std::vector<std::pair<int, int>>& m, int key) {
    for (const auto& [k, t] : m)
      if (k == key) return t;
    throw Error(ErrorCode::DegenerateGeometry, "cavity boundary is not a simple cycle");
  };
  for (int t : created) {
    Tri& tri = tris_[t];
    tri.n[0] = find(by_start, tri.v[1]);  // edge (b, x)
    tri.n[1] = find(by_end, tri.v[0]);    // edge (x, a)
  }
  // Freed only now: reusing a cavity slot earlier would alias the back pointers
  // still waiting to be redirected above.
  for (int t : cavity) {
    alive_[t] = false;
    free_.push_back(t);
  }
  last_ = created.front();
  for (int t : created)
    if (!is_ghost(t)) last_ = t;
}

DelaunayTriangulation::DelaunayTriangulation(std::span<const Coord> input) : points_(input.begin(), input.end()) {
  if (points_.size() < 3) throw Error(ErrorCode::DegenerateGeometry, "at least 3 points required");
  int max_coord = 1;
  for (const Coord& c : points_) {
    if (c.x < 0 || c.y < 0 || c.x >= (1 << 29) || c.y >= (1 << 29)) {
      throw Error(ErrorCode::OutOfBounds, "coordinates must lie in [0, 2^29)");
    }
    max_coord = std::max({max_coord, c.x, c.y});
  }
  int order = 1;
  while ((1 << order) <= max_coord) ++order;

  std::vector<int> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::uint64_t> keys(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    keys[i] = hilbert_key(static_cast<std::uint32_t>(points_[i].x), static_cast<std::uint32_t>(points_[i].y), order);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return points_[a] < points_[b];
  });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (points_[idx[i]] == points_[idx[i - 1]]) throw Error(ErrorCode::DuplicatePoint, "repeated point in triangulation");
  }

  const int a = idx[0];
  const int b = idx[1];
  std::size_t third = 2;
  while (third < idx.size() && orient2d(points_[a], points_[b], points_[idx[third]]) == 0) ++third;
  if (third == idx.size()) throw Error(ErrorCode::DegenerateGeometry, "all points are collinear");
  int c = idx[third];
  int b2 = b;
  if (orient2d(points_[a], points_[b], points_[c]) < 0) std::swap(b2, c);

  // Seed triangle plus three ghosts, one across each edge.
  const std::array<int, 3> seed{a, b2, c};
  const int r = new_triangle(seed);
  std::array<int, 3> ghosts{};
  for (int i = 0; i < 3; ++i) {
    const int p = seed[(i + 1) % 3];
    const int q = seed[(i + 2) % 3];
    ghosts[i] = new_triangle({q, p, kGhost});
    tris_[r].n[i] = ghosts[i];
    tris_[ghosts[i]].n[2] = r;
  }
  // Ghost i is (seed[i+2], seed[i+1], inf). Its edge (seed[i+1], inf) is shared
  // with ghost i+2 and its edge (inf, seed[i+2]) with ghost i+1.
  for (int i = 0; i < 3; ++i) {
    Tri& g = tris_[ghosts[i]];
    g.n[0] = ghosts[(i + 2) % 3];
    g.n[1] = ghosts[(i + 1) % 3];
  }
  last_ = r;

  for (std::size_t i = 2; i < idx.size(); ++i) {
    if (i == third) continue;
    insert(idx[i]);
  }

  for (std::size_t t = 0; t < tris_.size(); ++t) {
    if (alive_[t] && !is_ghost(static_cast<int>(t))) finite_.push_back(tris_[t].v);
  }
}

std::vector<int> DelaunayTriangulation::hull_vertices() const {
  std::vector<int> hull;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    if (!alive_[t] || !is_ghost(static_cast<int>(t))) continue;
    for (int v : tris_[t].v)
      if (v != kGhost) hull.push_back(v);
  }
  std::sort(hull.begin(), hull.end());
  hull.erase(std::unique(hull.begin(), hull.end()), hull.end());
  return hull;
}

}  // namespace sparsegrid
