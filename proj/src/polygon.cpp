#include <algorithm>
#include <cmath>

#include "splitweave/geometry.hpp"

namespace splitweave {

double length(Vec2 v) { return std::sqrt(dot(v, v)); }

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0;
  double twice = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n == 0) return {};
  // Accumulate relative to the first vertex to limit cancellation.
  const Vec2 o = poly[0];
  double twice = 0, cx = 0, cy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = poly[i] - o;
    Vec2 b = poly[(i + 1) % n] - o;
    double w = a.x * b.y - b.x * a.y;
    twice += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  if (std::abs(twice) < 1e-12) {
    Vec2 mean;
    for (const Vec2& p : poly) mean = mean + p;
    return mean * (1.0 / static_cast<double>(n));
  }
  return Vec2{o.x + cx / (3 * twice), o.y + cy / (3 * twice)};
}

bool is_convex(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e1 = poly[(i + 1) % n] - poly[i];
    Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    if (cross(e1, e2) < -1e-9 * length(e1) * length(e2)) return false;
  }
  return true;
}

bool point_in_polygon(std::span<const Vec2> poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

Polygon clip_half_plane(std::span<const Vec2> poly, Vec2 origin, Vec2 normal) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    double da = dot(a - origin, normal);
    double db = dot(b - origin, normal);
    if (da >= 0) out.push_back(a);
    if ((da >= 0) != (db >= 0)) {
      double t = da / (da - db);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

Polygon simplify(std::span<const Vec2> poly, double eps) {
  Polygon pts(poly.begin(), poly.end());
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size() && pts.size() >= 3; ++i) {
      const Vec2& prev = pts[(i + pts.size() - 1) % pts.size()];
      const Vec2& cur = pts[i];
      const Vec2& next = pts[(i + 1) % pts.size()];
      Vec2 e1 = cur - prev;
      Vec2 e2 = next - cur;
      double l1 = length(e1), l2 = length(e2);
      bool duplicate = l1 <= eps;
      bool collinear = !duplicate && l2 > eps && std::abs(cross(e1, e2)) <= eps * l1 * l2 && dot(e1, e2) > 0;
      if (duplicate || collinear) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  if (pts.size() < 3) pts.clear();
  return pts;
}

Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> convex_clip) {
  Polygon out(subject.begin(), subject.end());
  const std::size_t n = convex_clip.size();
  for (std::size_t i = 0; i < n && !out.empty(); ++i) {
    Vec2 a = convex_clip[i];
    Vec2 e = convex_clip[(i + 1) % n] - a;
    out = clip_half_plane(out, a, Vec2{-e.y, e.x});
  }
  return out;
}

Rect bounding_box(std::span<const Vec2> poly) {
  if (poly.empty()) return {};
  Rect r{poly[0].x, poly[0].y, poly[0].x, poly[0].y};
  for (const Vec2& p : poly) {
    r.x0 = std::min(r.x0, p.x);
    r.y0 = std::min(r.y0, p.y);
    r.x1 = std::max(r.x1, p.x);
    r.y1 = std::max(r.y1, p.y);
  }
  return r;
}

Polygon rect_polygon(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

Fragment make_fragment(int id, std::optional<int> row, std::optional<int> col, Polygon boundary) {
  Fragment f;
  f.id = id;
  f.row = row;
  f.col = col;
  f.area = signed_area(boundary);
  f.centroid = polygon_centroid(boundary);
  f.boundary = std::move(boundary);
  return f;
}

// ---------------------------------------------------------------------------
// Inset.

namespace {

constexpr double kMiterLimit = 4.0;
constexpr double kCollapseArea = 1e-3;

Vec2 inward_normal(Vec2 a, Vec2 b) {
  Vec2 e = b - a;
  double len = length(e);
  return Vec2{-e.y / len, e.x / len};
}

struct OffsetLine {
  Vec2 point;
  Vec2 dir;
  std::size_t edge;  // index of the source edge
};

std::optional<Vec2> intersect(const OffsetLine& l1, const OffsetLine& l2) {
  double denom = cross(l1.dir, l2.dir);
  if (std::abs(denom) < 1e-12 * length(l1.dir) * length(l2.dir)) return std::nullopt;
  double t = cross(l2.point - l1.point, l2.dir) / denom;
  return l1.point + l1.dir * t;
}

Polygon inset_convex(std::span<const Vec2> poly, double d) {
  Polygon out(poly.begin(), poly.end());
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n && !out.empty(); ++i) {
    Vec2 nrm = inward_normal(poly[i], poly[(i + 1) % n]);
    out = clip_half_plane(out, poly[i] + nrm * d, nrm);
  }
  return out;
}

// Offsets every edge, joins neighbours at their line intersection and drops
// edges whose direction reverses, then bevels reflex joins whose miter would
// exceed the limit.
Polygon inset_general(std::span<const Vec2> poly, double d) {
  const std::size_t n = poly.size();
  std::vector<OffsetLine> lines;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % n];
    lines.push_back({a + inward_normal(a, b) * d, b - a, i});
  }
  std::vector<Vec2> joins;
  for (int guard = 0; guard < static_cast<int>(n) + 1; ++guard) {
    const std::size_t m = lines.size();
    if (m < 3) return {};
    joins.assign(m, Vec2{});
    std::vector<bool> drop(m, false);
    for (std::size_t k = 0; k < m; ++k) {
      const OffsetLine& prev = lines[(k + m - 1) % m];
      auto q = intersect(prev, lines[k]);
      if (!q) {
        if (dot(prev.dir, lines[k].dir) < 0) return {};
        drop[k] = true;  // parallel continuation
        q = lines[k].point;
      }
      joins[k] = *q;
    }
    bool any = false;
    for (std::size_t k = 0; k < m; ++k) {
      Vec2 span = joins[(k + 1) % m] - joins[k];
      if (drop[k] || dot(span, lines[k].dir) < 0) {
        drop[k] = true;
        any = true;
      }
    }
    if (!any) break;
    std::vector<OffsetLine> kept;
    for (std::size_t k = 0; k < m; ++k)
      if (!drop[k]) kept.push_back(lines[k]);
    if (kept.size() == m) break;
    lines = std::move(kept);
  }
  const std::size_t m = lines.size();
  if (m < 3) return {};
  Polygon out;
  for (std::size_t k = 0; k < m; ++k) {
    const OffsetLine& prev = lines[(k + m - 1) % m];
    const OffsetLine& cur = lines[k];
    bool adjacent = (prev.edge + 1) % n == cur.edge;
    if (adjacent && cross(prev.dir, cur.dir) < 0) {
      Vec2 v = poly[cur.edge];
      Vec2 n1 = inward_normal(poly[prev.edge], v);
      Vec2 n2 = inward_normal(v, poly[(cur.edge + 1) % n]);
      double c = std::sqrt(std::max(0.0, (1 + dot(n1, n2)) / 2));
      if (c * kMiterLimit < 1) {
        out.push_back(v + n1 * d);
        out.push_back(v + n2 * d);
        continue;
      }
    }
    out.push_back(joins[k]);
  }
  return out;
}

}  // namespace

Polygon polygon_inset(std::span<const Vec2> poly, double distance) {
  if (distance <= 0) return Polygon(poly.begin(), poly.end());
  Polygon clean = simplify(poly);
  if (clean.size() < 3) return {};
  Polygon out = is_convex(clean) ? inset_convex(clean, distance) : inset_general(clean, distance);
  out = simplify(out);
  if (out.size() < 3 || signed_area(out) < kCollapseArea) return {};
  return out;
}

}  // namespace splitweave
