#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "splitweave/render.hpp"

namespace splitweave {

namespace {

constexpr double kPi = std::numbers::pi;

Polygon circle(Vec2 c, double r, int segments) {
  Polygon out;
  for (int i = 0; i < segments; ++i) {
    double a = 2 * kPi * i / segments;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return out;
}

void append_arc(Polygon& out, Vec2 c, double r, double from, double sweep, int segments, bool include_start) {
  for (int i = include_start ? 0 : 1; i <= segments; ++i) {
    double a = from + sweep * i / segments;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
}

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

// Sweep from `from` to `to`, taking the direction that does (or does not)
// pass through `via`.
double sweep_between(double from, double to, double via, bool through) {
  double ccw = wrap(to - from);
  bool contains = wrap(via - from) < ccw;
  return contains == through ? ccw : ccw - 2 * kPi;
}

Polygon crescent() {
  const Vec2 c0{0.5, 0.5}, c1{0.68, 0.4};
  const double r0 = 0.5, r1 = 0.42;
  Vec2 d = c1 - c0;
  double dist = length(d);
  double a = (r0 * r0 - r1 * r1 + dist * dist) / (2 * dist);
  double h = std::sqrt(r0 * r0 - a * a);
  Vec2 mid = c0 + d * (a / dist);
  Vec2 perp{-d.y / dist, d.x / dist};
  Vec2 i1 = mid + perp * h, i2 = mid - perp * h;

  Polygon out;
  double t1 = std::atan2(i1.y - c0.y, i1.x - c0.x), t2 = std::atan2(i2.y - c0.y, i2.x - c0.x);
  append_arc(out, c0, r0, t1, sweep_between(t1, t2, std::atan2(d.y, d.x), false), 40, true);
  double u2 = std::atan2(i2.y - c1.y, i2.x - c1.x), u1 = std::atan2(i1.y - c1.y, i1.x - c1.x);
  append_arc(out, c1, r1, u2, sweep_between(u2, u1, std::atan2(-d.y, -d.x), true), 32, false);
  out.pop_back();  // closes onto the first vertex
  return out;
}

Polygon petal() {
  const double radius = 0.625, offset = 0.375;
  const double span = std::atan2(0.5, offset);
  Polygon out;
  append_arc(out, {0.5 - offset, 0.5}, radius, -span, 2 * span, 24, true);
  append_arc(out, {0.5 + offset, 0.5}, radius, kPi - span, 2 * span, 24, false);
  out.pop_back();
  return out;
}

Polygon star(int points, double outer, double inner) {
  Polygon out;
  for (int i = 0; i < 2 * points; ++i) {
    double r = i % 2 == 0 ? outer : inner;
    double a = -kPi / 2 + kPi * i / points;
    out.push_back({0.5 + r * std::cos(a), 0.5 + r * std::sin(a)});
  }
  return out;
}

MotifDef builtin(std::string id, std::vector<Polygon> contours) {
  return MotifDef{std::move(id), MotifSource::builtin, std::move(contours)};
}

}  // namespace

MotifRegistry MotifRegistry::builtins() {
  MotifRegistry reg;
  const double h = std::sqrt(3.0) / 2;
  reg.add(builtin("circle", {circle({0.5, 0.5}, 0.5, 48)}));
  reg.add(builtin("ring", {circle({0.5, 0.5}, 0.5, 48), circle({0.5, 0.5}, 0.3, 48)}));
  reg.add(builtin("square", {rect_polygon(0.15, 0.15, 0.85, 0.85)}));
  reg.add(builtin("diamond", {{{0.5, 0}, {1, 0.5}, {0.5, 1}, {0, 0.5}}}));
  reg.add(builtin("triangle", {{{0.5, (1 - h) / 2}, {1, (1 + h) / 2}, {0, (1 + h) / 2}}}));
  reg.add(builtin("star5", {star(5, 0.5, 0.2)}));
  reg.add(builtin("cross", {{{0.35, 0}, {0.65, 0}, {0.65, 0.35}, {1, 0.35}, {1, 0.65}, {0.65, 0.65},
                             {0.65, 1}, {0.35, 1}, {0.35, 0.65}, {0, 0.65}, {0, 0.35}, {0.35, 0.35}}}));
  reg.add(builtin("crescent", {crescent()}));
  reg.add(builtin("petal", {petal()}));
  reg.add(builtin("stripebar", {rect_polygon(0, 0.35, 1, 0.65)}));
  return reg;
}

const MotifDef* MotifRegistry::find(std::string_view id) const {
  auto it = std::lower_bound(motifs_.begin(), motifs_.end(), id,
                             [](const MotifDef& m, std::string_view key) { return m.id < key; });
  return it != motifs_.end() && it->id == id ? &*it : nullptr;
}

std::vector<std::string> MotifRegistry::builtin_ids() const {
  std::vector<std::string> out;
  for (const MotifDef& m : motifs_)
    if (m.source == MotifSource::builtin) out.push_back(m.id);
  return out;
}

void MotifRegistry::add(MotifDef def) {
  auto it = std::lower_bound(motifs_.begin(), motifs_.end(), def.id,
                             [](const MotifDef& m, const std::string& key) { return m.id < key; });
  if (it != motifs_.end() && it->id == def.id) {
    *it = std::move(def);
  } else {
    motifs_.insert(it, std::move(def));
  }
}

// ---------------------------------------------------------------------------
// SVG motif files.

namespace {

class PathData {
 public:
  explicit PathData(std::string_view d) : d_(d) {}

  Polygon parse() {
    Polygon pts;
    Vec2 cur{}, start{};
    char cmd = 0;
    int subpaths = 0;
    bool closed = false;
    for (;;) {
      skip();
      if (pos_ >= d_.size()) break;
      char c = d_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        cmd = c;
        ++pos_;
        if (cmd == 'Z' || cmd == 'z') {
          closed = true;
          cur = start;
          continue;
        }
      } else if (cmd == 0) {
        throw std::runtime_error("path data must start with a command");
      }
      if (closed) throw std::runtime_error("path has more than one outline");
      bool rel = std::islower(static_cast<unsigned char>(cmd));
      Vec2 base = rel ? cur : Vec2{};
      switch (std::toupper(static_cast<unsigned char>(cmd))) {
        case 'M': {
          if (++subpaths > 1) throw std::runtime_error("path has more than one outline");
          cur = base + point();
          start = cur;
          pts.push_back(cur);
          cmd = rel ? 'l' : 'L';
          break;
        }
        case 'L':
          cur = base + point();
          pts.push_back(cur);
          break;
        case 'H':
          cur.x = (rel ? cur.x : 0) + number();
          pts.push_back(cur);
          break;
        case 'V':
          cur.y = (rel ? cur.y : 0) + number();
          pts.push_back(cur);
          break;
        case 'C': {
          Vec2 p1 = base + point(), p2 = base + point(), p3 = base + point();
          for (int i = 1; i <= 8; ++i) {
            double t = i / 8.0, u = 1 - t;
            pts.push_back(cur * (u * u * u) + p1 * (3 * u * u * t) + p2 * (3 * u * t * t) + p3 * (t * t * t));
          }
          cur = p3;
          break;
        }
        case 'Q': {
          Vec2 p1 = base + point(), p2 = base + point();
          for (int i = 1; i <= 8; ++i) {
            double t = i / 8.0, u = 1 - t;
            pts.push_back(cur * (u * u) + p1 * (2 * u * t) + p2 * (t * t));
          }
          cur = p2;
          break;
        }
        default: throw std::runtime_error(std::string("unsupported path command '") + cmd + "'");
      }
    }
    if (subpaths == 0) throw std::runtime_error("path has no outline");
    Polygon clean = simplify(pts);
    if (clean.size() < 3) throw std::runtime_error("outline has fewer than three distinct points");
    return clean;
  }

 private:
  void skip() {
    while (pos_ < d_.size() && (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ',')) ++pos_;
  }
  double number() {
    skip();
    std::size_t start = pos_;
    if (pos_ < d_.size() && (d_[pos_] == '-' || d_[pos_] == '+')) ++pos_;
    bool dot = false;
    while (pos_ < d_.size() && (std::isdigit(static_cast<unsigned char>(d_[pos_])) || (!dot && d_[pos_] == '.'))) {
      dot = dot || d_[pos_] == '.';
      ++pos_;
    }
    if (pos_ < d_.size() && (d_[pos_] == 'e' || d_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < d_.size() && (d_[pos_] == '-' || d_[pos_] == '+')) ++pos_;
      while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) ++pos_;
    }
    if (start == pos_) throw std::runtime_error("expected a number in path data");
    return std::stod(std::string(d_.substr(start, pos_ - start)));
  }
  Vec2 point() {
    double x = number();
    double y = number();
    return {x, y};
  }

  std::string_view d_;
  std::size_t pos_ = 0;
};

Polygon normalize_unit(Polygon poly) {
  Rect box = bounding_box(poly);
  double w = box.x1 - box.x0, h = box.y1 - box.y0;
  double side = std::max(w, h);
  if (side <= 0) throw std::runtime_error("outline has zero extent");
  double ox = (side - w) / 2, oy = (side - h) / 2;
  for (Vec2& p : poly) p = {(p.x - box.x0 + ox) / side, (p.y - box.y0 + oy) / side};
  return poly;
}

}  // namespace

Polygon parse_motif_svg(std::string_view svg_text) {
  static const std::regex path_tag(R"(<path\b[^>]*>)");
  static const std::regex d_attr(R"(\sd\s*=\s*(["'])([^"']*)\1)");
  std::string text(svg_text);
  auto begin = std::sregex_iterator(text.begin(), text.end(), path_tag);
  auto count = std::distance(begin, std::sregex_iterator());
  if (count == 0) throw std::runtime_error("no <path> element");
  if (count > 1) throw std::runtime_error("more than one <path> element");
  std::string tag = begin->str();
  std::smatch m;
  if (!std::regex_search(tag, m, d_attr)) throw std::runtime_error("<path> has no d attribute");
  return normalize_unit(PathData(m[2].str()).parse());
}

MotifRegistry load_motif_library(const std::filesystem::path& dir) {
  MotifRegistry reg = MotifRegistry::builtins();
  if (dir.empty()) return reg;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw Error(ErrorCode::motif_parse, "motif directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".svg") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::string failures;
  for (const auto& file : files) {
    try {
      std::ifstream in(file, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      if (!in) throw std::runtime_error("unreadable");
      reg.add(MotifDef{"user/" + file.stem().string(), MotifSource::user_file, {parse_motif_svg(buf.str())}});
    } catch (const std::exception& e) {
      failures += (failures.empty() ? "" : "; ") + file.filename().string() + ": " + e.what();
    }
  }
  if (!failures.empty()) throw Error(ErrorCode::motif_parse, "malformed motif files: " + failures);
  return reg;
}

}  // namespace splitweave
