#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "splitweave/geometry.hpp"

namespace splitweave {

namespace {

constexpr double kWeld = 1e-6;

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Uniform bucket grid over welded vertices.
class VertexIndex {
 public:
  explicit VertexIndex(double cell) : cell_(cell) {}

  // Returns the id of an existing vertex within kWeld of p, or registers p.
  std::size_t weld(Vec2 p) {
    auto [cx, cy] = cell_of(p);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (std::size_t id : it->second)
          if (std::abs(points_[id].x - p.x) <= kWeld && std::abs(points_[id].y - p.y) <= kWeld) return id;
      }
    points_.push_back(p);
    buckets_[key(cx, cy)].push_back(points_.size() - 1);
    return points_.size() - 1;
  }

  // Vertices strictly inside segment (a, b), ordered from a to b.
  std::vector<std::size_t> on_segment(std::size_t a, std::size_t b) const {
    Vec2 pa = points_[a], pb = points_[b];
    Vec2 e = pb - pa;
    double len2 = dot(e, e);
    std::vector<std::pair<double, std::size_t>> hits;
    auto [x0, y0] = cell_of({std::min(pa.x, pb.x), std::min(pa.y, pb.y)});
    auto [x1, y1] = cell_of({std::max(pa.x, pb.x), std::max(pa.y, pb.y)});
    for (long cx = x0 - 1; cx <= x1 + 1; ++cx)
      for (long cy = y0 - 1; cy <= y1 + 1; ++cy) {
        auto it = buckets_.find(key(cx, cy));
        if (it == buckets_.end()) continue;
        for (std::size_t id : it->second) {
          if (id == a || id == b) continue;
          Vec2 d = points_[id] - pa;
          double t = dot(d, e) / len2;
          if (t <= 0 || t >= 1) continue;
          double dist = std::abs(cross(e, d)) / std::sqrt(len2);
          if (dist <= kWeld) hits.emplace_back(t, id);
        }
      }
    std::sort(hits.begin(), hits.end());
    std::vector<std::size_t> out;
    for (auto& h : hits) out.push_back(h.second);
    return out;
  }

  Vec2 point(std::size_t id) const { return points_[id]; }

 private:
  std::pair<long, long> cell_of(Vec2 p) const {
    return {static_cast<long>(std::floor(p.x / cell_)), static_cast<long>(std::floor(p.y / cell_))};
  }
  static std::uint64_t key(long x, long y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(y);
  }

  double cell_;
  std::vector<Vec2> points_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

using Edge = std::pair<std::size_t, std::size_t>;

[[noreturn]] void topology(const std::string& why) { throw Error(ErrorCode::unsupported_topology, why); }

}  // namespace

FragmentSet merge_by_keys(const FragmentSet& fs, std::span<const std::int64_t> keys) {
  const std::size_t n = fs.fragments.size();
  if (keys.size() != n) throw Error(ErrorCode::field_type, "merge key count does not match fragment count");

  double extent = 1;
  for (const Fragment& f : fs.fragments) {
    Rect r = bounding_box(f.boundary);
    extent = std::max({extent, r.x1, r.y1});
  }
  VertexIndex index(std::max(1.0, extent / 64));

  // Welded vertex cycles, with T-junctions split so shared edges line up.
  std::vector<std::vector<std::size_t>> cycles(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const Vec2& p : fs.fragments[i].boundary) {
      std::size_t id = index.weld(p);
      if (cycles[i].empty() || cycles[i].back() != id) cycles[i].push_back(id);
    }
  for (auto& c : cycles)
    while (c.size() > 1 && c.front() == c.back()) c.pop_back();

  std::vector<std::vector<Edge>> edges(n);
  std::map<Edge, std::vector<std::size_t>> owners;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = cycles[i];
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::size_t a = c[k], b = c[(k + 1) % c.size()];
      std::size_t prev = a;
      auto mids = index.on_segment(a, b);
      mids.push_back(b);
      for (std::size_t v : mids) {
        edges[i].push_back({prev, v});
        owners[{prev, v}].push_back(i);
        prev = v;
      }
    }
  }

  DisjointSets groups(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const Edge& e : edges[i]) {
      auto it = owners.find({e.second, e.first});
      if (it == owners.end()) continue;
      for (std::size_t j : it->second)
        if (j != i && keys[i] == keys[j]) groups.unite(i, j);
    }

  std::map<std::size_t, std::vector<std::size_t>> components;  // keyed by smallest member index
  for (std::size_t i = 0; i < n; ++i) components[groups.find(i)].push_back(i);

  // Fragment ids equal positions, so the smallest member index is the smallest member id.
  FragmentSet out;
  out.source = fs.source;
  out.merged = true;
  int next_id = 0;
  for (auto& [root, members] : components) {
    if (members.size() == 1) {
      const Fragment& f = fs.fragments[members.front()];
      out.fragments.push_back(make_fragment(next_id++, std::nullopt, std::nullopt, f.boundary));
      continue;
    }
    std::map<Edge, int> count;
    for (std::size_t m : members)
      for (const Edge& e : edges[m]) ++count[e];
    std::map<std::size_t, std::vector<std::size_t>> next;
    for (const auto& [e, c] : count) {
      if (count.count({e.second, e.first})) continue;
      for (int k = 0; k < c; ++k) next[e.first].push_back(e.second);
    }
    for (const auto& [v, outs] : next)
      if (outs.size() != 1) topology("merged region touches itself at a vertex");
    if (next.empty()) topology("merged region has no boundary");
    std::vector<std::size_t> loop;
    std::size_t start = next.begin()->first;
    std::size_t v = start;
    do {
      loop.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) topology("merged boundary is not closed");
      v = it->second.front();
    } while (v != start && loop.size() <= next.size());
    if (loop.size() != next.size()) topology("merged region encloses a hole");
    Polygon boundary;
    for (std::size_t id : loop) boundary.push_back(index.point(id));
    boundary = simplify(boundary);
    if (boundary.size() < 3 || signed_area(boundary) <= 0) topology("merged region is degenerate");
    out.fragments.push_back(make_fragment(next_id++, std::nullopt, std::nullopt, std::move(boundary)));
  }
  return out;
}

}  // namespace splitweave
