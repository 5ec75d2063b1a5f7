#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "splitweave/geometry.hpp"

namespace splitweave {

namespace {

[[noreturn]] void range_error(const std::string& what) { throw Error(ErrorCode::range, what); }

void check_canvas(const CanvasSpec& canvas) {
  if (canvas.width < 16 || canvas.width > 4096 || canvas.height < 16 || canvas.height > 4096)
    range_error("canvas size must be within 16..4096");
}

}  // namespace

FragmentSet split_grid(const CanvasSpec& canvas, int rows, int cols) {
  check_canvas(canvas);
  if (rows < 1 || rows > 64 || cols < 1 || cols > 64) range_error("grid rows/cols must be within 1..64");
  const double w = static_cast<double>(canvas.width), h = static_cast<double>(canvas.height);
  FragmentSet fs;
  fs.source = FragmenterKind::grid;
  fs.row_count = rows;
  fs.col_count = cols;
  for (int r = 0; r < rows; ++r) {
    double y0 = r * h / rows, y1 = (r + 1) * h / rows;
    for (int c = 0; c < cols; ++c) {
      double x0 = c * w / cols, x1 = (c + 1) * w / cols;
      fs.fragments.push_back(make_fragment(r * cols + c, r, c, rect_polygon(x0, y0, x1, y1)));
    }
  }
  return fs;
}

FragmentSet split_brick(const CanvasSpec& canvas, int rows, int cols, double offset) {
  check_canvas(canvas);
  if (rows < 1 || rows > 64 || cols < 1 || cols > 64) range_error("brick rows/cols must be within 1..64");
  if (!(offset >= 0 && offset < 1)) range_error("brick offset must be within [0, 1)");
  const double w = static_cast<double>(canvas.width), h = static_cast<double>(canvas.height);
  FragmentSet fs;
  fs.source = FragmenterKind::brick;
  fs.row_count = rows;
  fs.col_count = cols;
  int id = 0;
  for (int r = 0; r < rows; ++r) {
    double y0 = r * h / rows, y1 = (r + 1) * h / rows;
    const double shift = offset * (r % 2);
    std::vector<double> cuts;
    for (int c = 0; c <= cols; ++c) cuts.push_back(std::clamp((c - shift) * w / cols, 0.0, w));
    if (shift > 0) cuts.push_back(w);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (cuts[c + 1] <= cuts[c]) continue;
      fs.fragments.push_back(
          make_fragment(id++, r, static_cast<int>(c), rect_polygon(cuts[c], y0, cuts[c + 1], y1)));
      fs.col_count = std::max(fs.col_count, static_cast<int>(c) + 1);
    }
  }
  return fs;
}

FragmentSet split_stripes(const CanvasSpec& canvas, int count, Orientation orientation) {
  check_canvas(canvas);
  if (count < 1 || count > 128) range_error("stripe count must be within 1..128");
  const double w = static_cast<double>(canvas.width), h = static_cast<double>(canvas.height);
  FragmentSet fs;
  fs.source = FragmenterKind::stripes;
  const bool horizontal = orientation == Orientation::horizontal;
  fs.row_count = horizontal ? count : 1;
  fs.col_count = horizontal ? 1 : count;
  for (int i = 0; i < count; ++i) {
    Polygon band = horizontal ? rect_polygon(0, i * h / count, w, (i + 1) * h / count)
                              : rect_polygon(i * w / count, 0, (i + 1) * w / count, h);
    fs.fragments.push_back(make_fragment(i, horizontal ? i : 0, horizontal ? 0 : i, std::move(band)));
  }
  return fs;
}

// ---------------------------------------------------------------------------
// Voronoi by half-plane clipping.

namespace {

constexpr double kCoincident = 1e-6;
constexpr int kSiteAttempts = 8;

Polygon voronoi_cell(const Polygon& frame, const std::vector<Vec2>& sites, std::size_t i) {
  Polygon cell = frame;
  const Vec2 s = sites[i];
  for (std::size_t j = 0; j < sites.size() && !cell.empty(); ++j) {
    if (j == i) continue;
    Vec2 mid = (s + sites[j]) * 0.5;
    cell = clip_half_plane(cell, mid, s - sites[j]);
  }
  return cell;
}

bool has_coincident(const std::vector<Vec2>& sites) {
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j)
      if (std::abs(sites[i].x - sites[j].x) <= kCoincident && std::abs(sites[i].y - sites[j].y) <= kCoincident)
        return true;
  return false;
}

}  // namespace

VoronoiDiagram voronoi_diagram(const CanvasSpec& canvas, int n, Seed seed, int relax_iters) {
  check_canvas(canvas);
  if (n < 2 || n > 256) range_error("voronoi site count must be within 2..256");
  if (relax_iters < 0 || relax_iters > 5) range_error("voronoi relaxation must be within 0..5");
  const double w = static_cast<double>(canvas.width), h = static_cast<double>(canvas.height);
  const Polygon frame = rect_polygon(0, 0, w, h);

  std::vector<Vec2> sites;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kSiteAttempts) throw Error(ErrorCode::degenerate_sites, "voronoi sites coincide after resampling");
    Stream rng(derive_seed(seed, "voronoi-sites", static_cast<std::uint64_t>(attempt)));
    sites.clear();
    for (int i = 0; i < n; ++i) {
      double x = rng.uniform() * w;
      double y = rng.uniform() * h;
      sites.push_back({x, y});
    }
    if (!has_coincident(sites)) break;
  }

  std::vector<Polygon> cells(sites.size());
  for (int iter = 0;; ++iter) {
    for (std::size_t i = 0; i < sites.size(); ++i) cells[i] = voronoi_cell(frame, sites, i);
    if (iter == relax_iters) break;
    for (std::size_t i = 0; i < sites.size(); ++i) sites[i] = polygon_centroid(cells[i]);
    if (has_coincident(sites)) throw Error(ErrorCode::degenerate_sites, "relaxed voronoi sites coincide");
  }

  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sites[a].y != sites[b].y) return sites[a].y < sites[b].y;
    if (sites[a].x != sites[b].x) return sites[a].x < sites[b].x;
    return a < b;
  });

  VoronoiDiagram out;
  out.cells.source = FragmenterKind::voronoi;
  for (std::size_t id = 0; id < order.size(); ++id) {
    out.sites.push_back(sites[order[id]]);
    out.cells.fragments.push_back(
        make_fragment(static_cast<int>(id), std::nullopt, std::nullopt, std::move(cells[order[id]])));
  }
  return out;
}

FragmentSet split_voronoi(const CanvasSpec& canvas, int n, Seed seed, int relax_iters) {
  return voronoi_diagram(canvas, n, seed, relax_iters).cells;
}

}  // namespace splitweave
