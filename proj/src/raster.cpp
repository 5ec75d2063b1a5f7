#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "splitweave/render.hpp"

namespace splitweave {

namespace {

constexpr int kSubRows = 4;

enum class FillRule { nonzero, evenodd };

struct Canvas {
  int width, height;
  std::vector<float> rgb;

  Canvas(int w, int h, Color bg) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
      rgb[i] = bg.r;
      rgb[i + 1] = bg.g;
      rgb[i + 2] = bg.b;
    }
  }

  // Composites `color` over every pixel covered by `contours`.
  void fill(const std::vector<Polygon>& contours, FillRule rule, Color color, double opacity) {
    double ymin = 1e300, ymax = -1e300;
    for (const Polygon& c : contours)
      for (const Vec2& p : c) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
      }
    if (ymin > ymax) return;
    int row0 = std::max(0, static_cast<int>(std::floor(ymin)));
    int row1 = std::min(height - 1, static_cast<int>(std::ceil(ymax)));
    std::vector<float> coverage(width);
    struct Crossing {
      double x;
      int dir;
    };
    std::vector<Crossing> xs;
    for (int row = row0; row <= row1; ++row) {
      std::fill(coverage.begin(), coverage.end(), 0.0f);
      bool any = false;
      for (int s = 0; s < kSubRows; ++s) {
        double y = row + (s + 0.5) / kSubRows;
        xs.clear();
        for (const Polygon& c : contours) {
          for (std::size_t i = 0; i < c.size(); ++i) {
            Vec2 a = c[i], b = c[(i + 1) % c.size()];
            if ((a.y <= y) == (b.y <= y)) continue;
            double x = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
            xs.push_back({x, b.y > a.y ? 1 : -1});
          }
        }
        std::sort(xs.begin(), xs.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
        int winding = 0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
          winding += xs[i].dir;
          bool inside = rule == FillRule::nonzero ? winding != 0 : (winding & 1) != 0;
          if (inside) {
            span(coverage, xs[i].x, xs[i + 1].x);
            any = true;
          }
        }
      }
      if (!any) continue;
      float* px = &rgb[static_cast<std::size_t>(row) * width * 3];
      for (int x = 0; x < width; ++x) {
        float a = std::min(coverage[x], 1.0f) * static_cast<float>(opacity);
        if (a <= 0) continue;
        px[3 * x] += (color.r - px[3 * x]) * a;
        px[3 * x + 1] += (color.g - px[3 * x + 1]) * a;
        px[3 * x + 2] += (color.b - px[3 * x + 2]) * a;
      }
    }
  }

  void span(std::vector<float>& coverage, double x0, double x1) const {
    x0 = std::clamp(x0, 0.0, static_cast<double>(width));
    x1 = std::clamp(x1, 0.0, static_cast<double>(width));
    if (x1 <= x0) return;
    constexpr float w = 1.0f / kSubRows;
    int c0 = static_cast<int>(x0), c1 = static_cast<int>(x1);
    if (c0 == c1) {
      coverage[std::min(c0, width - 1)] += static_cast<float>(x1 - x0) * w;
      return;
    }
    coverage[c0] += static_cast<float>(c0 + 1 - x0) * w;
    for (int c = c0 + 1; c < c1; ++c) coverage[c] += w;
    if (c1 < width) coverage[c1] += static_cast<float>(x1 - c1) * w;
  }
};

Polygon oriented(Polygon p) {
  if (signed_area(p) < 0) std::reverse(p.begin(), p.end());
  return p;
}

// Union of per-edge quads and vertex discs; all share one orientation so the
// nonzero rule fills their union.
std::vector<Polygon> stroke_outline(const Polygon& poly, double width) {
  std::vector<Polygon> out;
  const double h = width / 2;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    Vec2 d = b - a;
    double len = length(d);
    if (len <= 0) continue;
    Vec2 n{-d.y / len * h, d.x / len * h};
    out.push_back(oriented({a + n, b + n, b - n, a - n}));
    Polygon disc;
    for (int k = 0; k < 8; ++k) {
      double t = k * std::numbers::pi / 4;
      disc.push_back({a.x + h * std::cos(t), a.y + h * std::sin(t)});
    }
    out.push_back(oriented(std::move(disc)));
  }
  return out;
}

Polygon scaled(const Polygon& poly, double k) {
  Polygon out;
  out.reserve(poly.size());
  for (const Vec2& p : poly) out.push_back(p * k);
  return out;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> encode_png(const Canvas& c) {
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(c.height) * (c.width * 3 + 1));
  for (int y = 0; y < c.height; ++y) {
    raw.push_back(0);
    const float* px = &c.rgb[static_cast<std::size_t>(y) * c.width * 3];
    for (int i = 0; i < c.width * 3; ++i)
      raw.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(px[i]), 0L, 255L)));
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_size);
  if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw Error(ErrorCode::io, "PNG compression failed");
  packed.resize(packed_size);

  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(c.width));
  put_u32(ihdr, static_cast<std::uint32_t>(c.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

}  // namespace

std::vector<std::uint8_t> PngRasterizer::rasterize(const SceneGraph& scene, int size) const {
  if (size < 1 || size > 8192) throw Error(ErrorCode::range, "raster size must be between 1 and 8192");
  const double k = static_cast<double>(size) / scene.canvas.width;
  const int height = std::max(1, static_cast<int>(std::lround(size * static_cast<double>(scene.canvas.height) /
                                                             scene.canvas.width)));
  Canvas canvas(size, height, scene.canvas.background);
  for (const SceneElement& el : scene.elements) {
    if (const auto* f = std::get_if<FilledPath>(&el)) {
      canvas.fill({scaled(flatten_outline(f->polygon, f->corner_radius), k)}, FillRule::nonzero, f->fill, f->opacity);
    } else if (const auto* s = std::get_if<StrokedPath>(&el)) {
      Polygon path = scaled(flatten_outline(s->polygon, s->corner_radius), k);
      canvas.fill(stroke_outline(path, s->width * k), FillRule::nonzero, s->stroke, s->opacity);
    } else {
      const auto& m = std::get<MotifInstance>(el);
      auto def = std::find_if(scene.defs.begin(), scene.defs.end(),
                              [&](const MotifDef& d) { return d.id == m.motif_id; });
      if (def == scene.defs.end()) throw Error(ErrorCode::unknown_motif, "motif '" + m.motif_id + "' has no definition");
      Affine t = Affine::scale(k, k) * m.transform;
      std::vector<Polygon> contours;
      for (const Polygon& c : def->contours) {
        Polygon out;
        for (const Vec2& p : c) out.push_back(t.apply(p));
        contours.push_back(std::move(out));
      }
      canvas.fill(contours, FillRule::evenodd, m.fill.value_or(Color{0, 0, 0}), m.opacity);
    }
  }
  return encode_png(canvas);
}

std::pair<int, int> png_dimensions(std::span<const std::uint8_t> png) {
  if (png.size() < 24 || png[0] != 0x89 || png[1] != 'P') throw Error(ErrorCode::io, "not a PNG stream");
  auto u32 = [&](std::size_t at) {
    return static_cast<int>((std::uint32_t{png[at]} << 24) | (std::uint32_t{png[at + 1]} << 16) |
                            (std::uint32_t{png[at + 2]} << 8) | std::uint32_t{png[at + 3]});
  };
  return {u32(16), u32(20)};
}

}  // namespace splitweave
