#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "splitweave/ast.hpp"
#include "splitweave/rng.hpp"

namespace splitweave {

struct Vec2 {
  double x = 0;
  double y = 0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double length(Vec2 v);

/// Closed polygon, vertices listed so that the shoelace signed area is
/// positive (x right, y down).
using Polygon = std::vector<Vec2>;

double signed_area(std::span<const Vec2> poly);
// Analytic area centroid; falls back to the vertex mean for degenerate input.
Vec2 polygon_centroid(std::span<const Vec2> poly);
bool is_convex(std::span<const Vec2> poly);
// Even-odd point containment.
bool point_in_polygon(std::span<const Vec2> poly, Vec2 p);
// Keeps the part of `poly` where dot(x - origin, normal) >= 0.
Polygon clip_half_plane(std::span<const Vec2> poly, Vec2 origin, Vec2 normal);
// Drops repeated and collinear vertices.
Polygon simplify(std::span<const Vec2> poly, double eps = 1e-9);
// Intersection of two convex polygons.
Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> convex_clip);

struct Rect {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;
};
Rect bounding_box(std::span<const Vec2> poly);
Polygon rect_polygon(double x0, double y0, double x1, double y1);

/// Inward offset with miter joins (limit 4, bevel beyond). Returns an empty
/// polygon once the offset collapses the shape.
Polygon polygon_inset(std::span<const Vec2> poly, double distance);

enum class FragmenterKind { grid, brick, stripes, voronoi };

struct Fragment {
  int id = 0;
  std::optional<int> row;
  std::optional<int> col;
  Polygon boundary;
  Vec2 centroid;
  double area = 0;
};

Fragment make_fragment(int id, std::optional<int> row, std::optional<int> col, Polygon boundary);

struct FragmentSet {
  std::vector<Fragment> fragments;  // sorted by id, ids 0..n-1
  FragmenterKind source = FragmenterKind::grid;
  int row_count = 0;  // 0 when rows are unavailable
  int col_count = 0;
  bool merged = false;
};

enum class Orientation { horizontal, vertical };

FragmentSet split_grid(const CanvasSpec& canvas, int rows, int cols);
FragmentSet split_brick(const CanvasSpec& canvas, int rows, int cols, double offset);
FragmentSet split_stripes(const CanvasSpec& canvas, int count, Orientation orientation);

struct VoronoiDiagram {
  std::vector<Vec2> sites;  // indexed by fragment id
  FragmentSet cells;
};

VoronoiDiagram voronoi_diagram(const CanvasSpec& canvas, int sites, Seed seed, int relax_iters);
FragmentSet split_voronoi(const CanvasSpec& canvas, int sites, Seed seed, int relax_iters);

/// Dissolves shared edges between fragments with equal keys. One output
/// fragment per edge-connected component; ids follow the smallest member id.
FragmentSet merge_by_keys(const FragmentSet& fs, std::span<const std::int64_t> keys);

}  // namespace splitweave
