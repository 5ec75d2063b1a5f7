#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "splitweave/geometry.hpp"
#include "splitweave/parser.hpp"

namespace test {

inline const char* kMinimal =
    "(pattern (canvas :width 256 :height 256 :background \"#FFFFFF\") (layer (grid :rows 2 :cols 2) "
    "(fill :color (cycle :key id :colors (\"#112233\" \"#445566\")))))";

inline splitweave::Program minimal() { return splitweave::parse(kMinimal); }

// Program with one layer built from the given node forms.
inline std::string program_text(const std::string& nodes, int w = 256, int h = 256) {
  return "(pattern (canvas :width " + std::to_string(w) + " :height " + std::to_string(h) +
         " :background \"#FFFFFF\") (layer " + nodes + "))";
}

// Shoelace area, written independently of the library.
inline double shoelace(const std::vector<splitweave::Vec2>& poly) {
  double twice = 0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2;
}

// Crossing-number containment test.
inline bool contains(const std::vector<splitweave::Vec2>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

// Sutherland-Hodgman clip of `subject` against convex `clip` (either winding).
inline std::vector<splitweave::Vec2> clip_convex(std::vector<splitweave::Vec2> subject,
                                                 const std::vector<splitweave::Vec2>& clip) {
  double sign = shoelace(clip) >= 0 ? 1 : -1;
  for (std::size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
    auto a = clip[i];
    auto b = clip[(i + 1) % clip.size()];
    auto side = [&](splitweave::Vec2 p) { return sign * ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)); };
    std::vector<splitweave::Vec2> out;
    for (std::size_t j = 0; j < subject.size(); ++j) {
      auto p = subject[j];
      auto q = subject[(j + 1) % subject.size()];
      double sp = side(p), sq = side(q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        double t = sp / (sp - sq);
        out.push_back({p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t});
      }
    }
    subject = std::move(out);
  }
  return subject;
}

inline bool convex(const std::vector<splitweave::Vec2>& poly) {
  int sign = 0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    auto a = poly[i], b = poly[(i + 1) % n], c = poly[(i + 2) % n];
    double z = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (std::abs(z) < 1e-9) continue;
    int s = z > 0 ? 1 : -1;
    if (sign && s != sign) return false;
    sign = s;
  }
  return true;
}

// Total pairwise intersection area of convex fragments.
inline double convex_overlap(const splitweave::FragmentSet& fs) {
  double total = 0;
  for (std::size_t i = 0; i < fs.fragments.size(); ++i) {
    auto bi = splitweave::bounding_box(fs.fragments[i].boundary);
    for (std::size_t j = i + 1; j < fs.fragments.size(); ++j) {
      auto bj = splitweave::bounding_box(fs.fragments[j].boundary);
      if (bi.x1 <= bj.x0 || bj.x1 <= bi.x0 || bi.y1 <= bj.y0 || bj.y1 <= bi.y0) continue;
      total += std::abs(shoelace(clip_convex(fs.fragments[i].boundary, fs.fragments[j].boundary)));
    }
  }
  return total;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Fresh scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("sw-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

// Kolmogorov-Smirnov distance of a sample against U(0, 1).
inline double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size()), d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, std::abs((i + 1) / n - xs[i]));
    d = std::max(d, std::abs(xs[i] - i / n));
  }
  return d;
}

// Nearest-site oracle; also reports the distance to the closest bisector.
struct Nearest {
  std::size_t site;
  double bisector_distance;
};

inline Nearest nearest_site(const std::vector<splitweave::Vec2>& sites, splitweave::Vec2 p) {
  auto d2 = [&](std::size_t i) {
    double dx = p.x - sites[i].x, dy = p.y - sites[i].y;
    return dx * dx + dy * dy;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < sites.size(); ++i)
    if (d2(i) < d2(best)) best = i;
  double margin = INFINITY;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (i == best) continue;
    double sep = std::hypot(sites[i].x - sites[best].x, sites[i].y - sites[best].y);
    if (sep == 0) continue;
    margin = std::min(margin, (d2(i) - d2(best)) / (2 * sep));
  }
  return {best, margin};
}

}  // namespace test
