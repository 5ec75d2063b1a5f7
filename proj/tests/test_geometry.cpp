#include <doctest.h>

#include <map>
#include <set>

#include "splitweave/fields.hpp"
#include "splitweave/geometry.hpp"
#include "support.hpp"

using namespace splitweave;
using doctest::Approx;

namespace {

CanvasSpec canvas(int w, int h) { return CanvasSpec{w, h, Color{255, 255, 255}}; }

double area_sum(const FragmentSet& fs) {
  double s = 0;
  for (const Fragment& f : fs.fragments) s += test::shoelace(f.boundary);
  return s;
}

void check_ids(const FragmentSet& fs) {
  for (std::size_t i = 0; i < fs.fragments.size(); ++i) CHECK(fs.fragments[i].id == static_cast<int>(i));
}

}  // namespace

TEST_CASE("polygon primitives") {
  Polygon sq = rect_polygon(0, 0, 10, 10);
  CHECK(signed_area(sq) == Approx(100));
  CHECK(test::shoelace(sq) > 0);  // positive orientation in the y-down frame
  Vec2 c = polygon_centroid(sq);
  CHECK(c.x == Approx(5));
  CHECK(c.y == Approx(5));
  CHECK(is_convex(sq));
  CHECK(point_in_polygon(sq, {5, 5}));
  CHECK_FALSE(point_in_polygon(sq, {15, 5}));
  Polygon half = clip_half_plane(sq, {4, 0}, {1, 0});
  CHECK(signed_area(half) == Approx(60));
  Polygon noisy{{0, 0}, {5, 0}, {10, 0}, {10, 10}, {10, 10}, {0, 10}};
  CHECK(simplify(noisy).size() == 4);
}

TEST_CASE("grid 2x2 on 100x100") {
  FragmentSet fs = split_grid(canvas(100, 100), 2, 2);
  REQUIRE(fs.fragments.size() == 4);
  check_ids(fs);
  for (const Fragment& f : fs.fragments) CHECK(f.area == Approx(2500));
  // Row-major ids.
  CHECK(*fs.fragments[1].row == 0);
  CHECK(*fs.fragments[1].col == 1);
  CHECK(*fs.fragments[2].row == 1);
}

TEST_CASE("grid 1x1 is the canvas") {
  FragmentSet fs = split_grid(canvas(100, 80), 1, 1);
  REQUIRE(fs.fragments.size() == 1);
  auto bb = bounding_box(fs.fragments[0].boundary);
  CHECK(bb.x0 == 0);
  CHECK(bb.y0 == 0);
  CHECK(bb.x1 == 100);
  CHECK(bb.y1 == 80);
}

TEST_CASE("grid 2x3: id 4 is row 1 col 1 spanning x in [W/3, 2W/3]") {
  FragmentSet fs = split_grid(canvas(100, 100), 2, 3);
  const Fragment& f = fs.fragments[4];
  CHECK(*f.row == 1);
  CHECK(*f.col == 1);
  auto bb = bounding_box(f.boundary);
  CHECK(bb.x0 == Approx(100.0 * 1 / 3).epsilon(1e-9));
  CHECK(bb.x1 == Approx(100.0 * 2 / 3).epsilon(1e-9));
  CHECK(area_sum(fs) == Approx(10000));
}

TEST_CASE("brick with zero offset equals grid") {
  FragmentSet b = split_brick(canvas(120, 90), 3, 4, 0);
  FragmentSet g = split_grid(canvas(120, 90), 3, 4);
  REQUIRE(b.fragments.size() == g.fragments.size());
  for (std::size_t i = 0; i < b.fragments.size(); ++i) CHECK(b.fragments[i].boundary == g.fragments[i].boundary);
}

TEST_CASE("brick offset 0.5: odd row is cut at 0, 25, 75, 100") {
  FragmentSet fs = split_brick(canvas(100, 100), 2, 2, 0.5);
  REQUIRE(fs.fragments.size() == 5);
  check_ids(fs);
  std::vector<double> widths;
  for (const Fragment& f : fs.fragments)
    if (*f.row == 1) {
      auto bb = bounding_box(f.boundary);
      widths.push_back(bb.x1 - bb.x0);
    }
  REQUIRE(widths.size() == 3);
  CHECK(widths[0] == Approx(25));
  CHECK(widths[1] == Approx(50));
  CHECK(widths[2] == Approx(25));
}

TEST_CASE("brick rows always sum to the canvas width") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int w = 16 + static_cast<int>(rng() % 700), h = 16 + static_cast<int>(rng() % 700);
    int rows = 1 + static_cast<int>(rng() % 12), cols = 1 + static_cast<int>(rng() % 12);
    double offset = std::uniform_real_distribution<double>(0, 0.999)(rng);
    FragmentSet fs = split_brick(canvas(w, h), rows, cols, offset);
    std::map<int, double> row_area;
    for (const Fragment& f : fs.fragments) row_area[*f.row] += test::shoelace(f.boundary);
    for (auto [r, a] : row_area) CHECK(a == Approx(static_cast<double>(w) * h / rows).epsilon(1e-9));
  }
}

TEST_CASE("stripes") {
  CHECK(split_stripes(canvas(100, 100), 1, Orientation::vertical).fragments.size() == 1);
  FragmentSet v = split_stripes(canvas(100, 100), 4, Orientation::vertical);
  for (const Fragment& f : v.fragments) {
    auto bb = bounding_box(f.boundary);
    CHECK(bb.x1 - bb.x0 == Approx(25));
  }
  FragmentSet h = split_stripes(canvas(100, 100), 3, Orientation::horizontal);
  auto bb = bounding_box(h.fragments[1].boundary);
  CHECK(bb.y0 == Approx(100.0 / 3).epsilon(1e-9));
  CHECK(bb.y1 == Approx(200.0 / 3).epsilon(1e-9));
  // Stripes carry both indices: a band is one row (horizontal) or one column (vertical).
  CHECK(*h.fragments[2].row == 2);
  CHECK(*v.fragments[3].col == 3);
}

TEST_CASE("voronoi sites are respected by a brute-force lattice") {
  for (Seed seed = 0; seed < 10; ++seed) {
    VoronoiDiagram d = voronoi_diagram(canvas(100, 100), 8, seed, 0);
    REQUIRE(d.sites.size() == d.cells.fragments.size());
    int agree = 0, total = 0;
    for (int y = 0; y < 100; ++y)
      for (int x = 0; x < 100; ++x) {
        Vec2 p{x + 0.5, y + 0.5};
        auto near = test::nearest_site(d.sites, p);
        if (near.bisector_distance < 0.5) continue;
        ++total;
        agree += test::contains(d.cells.fragments[near.site].boundary, p.x, p.y);
      }
    CHECK(agree == total);
  }
}

TEST_CASE("voronoi with two sites splits along a near-vertical bisector") {
  // Search seeds until the two sites land near (25, 50) and (75, 50).
  std::optional<VoronoiDiagram> found;
  for (Seed seed = 0; seed < 200000 && !found; ++seed) {
    VoronoiDiagram d = voronoi_diagram(canvas(100, 100), 2, seed, 0);
    auto near = [](Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y) < 10; };
    bool ok = (near(d.sites[0], {25, 50}) && near(d.sites[1], {75, 50})) ||
              (near(d.sites[1], {25, 50}) && near(d.sites[0], {75, 50}));
    if (ok) found = d;
  }
  REQUIRE(found);
  Vec2 a = found->sites[0], b = found->sites[1];
  // The bisector direction is perpendicular to b - a; near-vertical means |dy| small.
  CHECK(std::abs(b.y - a.y) < std::abs(b.x - a.x));
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) {
      Vec2 p{x + 0.5, y + 0.5};
      auto n = test::nearest_site(found->sites, p);
      if (n.bisector_distance < 0.5) continue;
      CHECK(test::contains(found->cells.fragments[n.site].boundary, p.x, p.y));
    }
}

TEST_CASE("lloyd relaxation pulls centroids toward sites") {
  int improved = 0;
  for (Seed seed = 1; seed <= 20; ++seed) {
    auto mean_gap = [](const VoronoiDiagram& d) {
      double s = 0;
      for (std::size_t i = 0; i < d.sites.size(); ++i) {
        Vec2 c = polygon_centroid(d.cells.fragments[i].boundary);
        s += std::hypot(c.x - d.sites[i].x, c.y - d.sites[i].y);
      }
      return s / d.sites.size();
    };
    double raw = mean_gap(voronoi_diagram(canvas(200, 200), 12, seed, 0));
    double relaxed = mean_gap(voronoi_diagram(canvas(200, 200), 12, seed, 1));
    improved += relaxed < raw;
  }
  CHECK(improved == 20);
}

TEST_CASE("voronoi is deterministic and partitions the canvas") {
  for (int n : {2, 5, 16, 64, 200}) {
    FragmentSet a = split_voronoi(canvas(320, 240), n, 99, 1);
    FragmentSet b = split_voronoi(canvas(320, 240), n, 99, 1);
    REQUIRE(a.fragments.size() == b.fragments.size());
    for (std::size_t i = 0; i < a.fragments.size(); ++i) CHECK(a.fragments[i].boundary == b.fragments[i].boundary);
    check_ids(a);
    CHECK(std::abs(area_sum(a) - 320.0 * 240) / (320.0 * 240) <= 5e-3);
    CHECK(test::convex_overlap(a) <= 1e-3 * 320 * 240);
    CHECK_FALSE(a.fragments[0].row.has_value());
  }
}

TEST_CASE("voronoi ids run top to bottom") {
  VoronoiDiagram d = voronoi_diagram(canvas(300, 300), 30, 4, 0);
  for (std::size_t i = 1; i < d.sites.size(); ++i) {
    bool ordered = d.sites[i - 1].y < d.sites[i].y ||
                   (d.sites[i - 1].y == d.sites[i].y && d.sites[i - 1].x <= d.sites[i].x);
    CHECK(ordered);
  }
}

TEST_CASE("merge with an injective key is the identity") {
  FragmentSet fs = split_grid(canvas(100, 100), 3, 3);
  FragmentSet m = merge_fragments(fs, CycleField{Axis::id, {Decimal::from_int(0), Decimal::from_int(1),
                                                            Decimal::from_int(2), Decimal::from_int(3),
                                                            Decimal::from_int(4), Decimal::from_int(5),
                                                            Decimal::from_int(6), Decimal::from_int(7),
                                                            Decimal::from_int(8)}},
                                  canvas(100, 100), 0);
  REQUIRE(m.fragments.size() == fs.fragments.size());
  for (std::size_t i = 0; i < fs.fragments.size(); ++i)
    CHECK(test::shoelace(m.fragments[i].boundary) == Approx(test::shoelace(fs.fragments[i].boundary)));
}

TEST_CASE("merge grid 2x2 by row into two 100x50 bands") {
  FragmentSet fs = split_grid(canvas(100, 100), 2, 2);
  FragmentSet m = merge_fragments(fs, AltField{Axis::row, {Decimal::from_int(0), Decimal::from_int(1)}},
                                  canvas(100, 100), 0);
  REQUIRE(m.fragments.size() == 2);
  for (const Fragment& f : m.fragments) {
    CHECK(test::shoelace(f.boundary) == Approx(5000));
    auto bb = bounding_box(f.boundary);
    CHECK(bb.x1 - bb.x0 == Approx(100));
    CHECK(bb.y1 - bb.y0 == Approx(50));
  }
}

TEST_CASE("corner cells sharing a key stay separate components") {
  FragmentSet fs = split_grid(canvas(90, 90), 3, 3);
  std::vector<std::int64_t> keys{7, 1, 7, 2, 3, 4, 7, 5, 7};
  FragmentSet m = merge_by_keys(fs, keys);
  // Oracle: components of the edge-adjacency graph restricted to equal keys.
  auto adjacent = [](int a, int b) {
    int ra = a / 3, ca = a % 3, rb = b / 3, cb = b % 3;
    return std::abs(ra - rb) + std::abs(ca - cb) == 1;
  };
  std::vector<int> parent(9);
  for (int i = 0; i < 9; ++i) parent[i] = i;
  std::function<int(int)> root = [&](int i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b)
      if (keys[a] == keys[b] && adjacent(a, b)) parent[root(a)] = root(b);
  std::set<int> comps;
  for (int i = 0; i < 9; ++i) comps.insert(root(i));
  CHECK(m.fragments.size() == comps.size());
  CHECK(m.fragments.size() == 9);
}

TEST_CASE("merged L-shape keeps area and ids follow the smallest member") {
  FragmentSet fs = split_grid(canvas(100, 100), 2, 2);
  FragmentSet m = merge_by_keys(fs, std::vector<std::int64_t>{5, 5, 5, 9});
  REQUIRE(m.fragments.size() == 2);
  CHECK(test::shoelace(m.fragments[0].boundary) == Approx(7500));
  CHECK(test::shoelace(m.fragments[1].boundary) == Approx(2500));
  CHECK(test::contains(m.fragments[0].boundary, 75, 25));
  CHECK(test::contains(m.fragments[0].boundary, 25, 75));
  CHECK_FALSE(test::contains(m.fragments[0].boundary, 75, 75));
}

TEST_CASE("polygon inset") {
  Polygon sq = rect_polygon(0, 0, 100, 100);
  CHECK(polygon_inset(sq, 0) == sq);
  Polygon in = polygon_inset(sq, 10);
  CHECK(test::shoelace(in) == Approx(6400));
  auto bb = bounding_box(in);
  CHECK(bb.x0 == Approx(10));
  CHECK(bb.x1 == Approx(90));

  double side = 100, h = side * std::sqrt(3.0) / 2;
  Polygon tri{{0, h}, {side / 2, 0}, {side, h}};
  if (test::shoelace(tri) < 0) std::reverse(tri.begin(), tri.end());
  double inradius = side / (2 * std::sqrt(3.0));
  CHECK(polygon_inset(tri, inradius + 1).empty());
  CHECK_FALSE(polygon_inset(tri, inradius - 1).empty());
}
