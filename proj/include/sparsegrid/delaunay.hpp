#pragma once

#include "sparsegrid/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace sparsegrid {

/// Exact orientation of (a, b, c): positive when counter-clockwise in a
/// y-up frame. Coordinates must fit in 30 bits.
std::int64_t orient2d(const Coord& a, const Coord& b, const Coord& c);

/// Positive when d lies strictly inside the circumcircle of counter-clockwise (a, b, c).
int incircle_sign(const Coord& a, const Coord& b, const Coord& c, const Coord& d);

// Delaunay triangulation of distinct integer points, built incrementally
// (Bowyer-Watson) in Hilbert-curve order with exact predicates. The convex hull
// is closed off by ghost triangles sharing a vertex at infinity, so hull
// triangles are exact even for nearly collinear boundary points.
class DelaunayTriangulation {
 public:
  /// Throws DegenerateGeometry with fewer than 3 points or if all are collinear,
  /// DuplicatePoint on repeated points.
  explicit DelaunayTriangulation(std::span<const Coord> points);

  std::span<const Coord> points() const { return points_; }

  /// Finite triangles as counter-clockwise vertex index triples.
  const std::vector<std::array<int, 3>>& triangles() const { return finite_; }

  /// Indices of convex hull vertices.
  std::vector<int> hull_vertices() const;

 private:
  static constexpr int kGhost = -1;

  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // n[i] is across the edge opposite v[i]
  };

  bool is_ghost(int t) const;
  bool in_circumcircle(int t, const Coord& x) const;
  int locate(const Coord& x, int start) const;
  void insert(int vertex);
  int new_triangle(const std::array<int, 3>& v);

  std::vector<Coord> points_;
  std::vector<Tri> tris_;
  std::vector<bool> alive_;
  std::vector<int> free_;
  std::vector<unsigned> visit_stamp_;
  std::vector<unsigned> cavity_stamp_;
  unsigned stamp_ = 0;
  int last_ = 0;
  mutable unsigned walk_counter_ = 0;
  std::vector<std::array<int, 3>> finite_;
};

}  // namespace sparsegrid
