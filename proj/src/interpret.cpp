#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "splitweave/fields.hpp"
#include "splitweave/render.hpp"

namespace splitweave {

Affine Affine::rotate_degrees(double degrees) {
  double turns = degrees / 90.0;
  double s, c;
  // Quarter turns are exact so axis-aligned rotations stay bit-stable.
  if (turns == std::floor(turns)) {
    static constexpr double kSin[4] = {0, 1, 0, -1};
    static constexpr double kCos[4] = {1, 0, -1, 0};
    long q = static_cast<long>(turns) % 4;
    if (q < 0) q += 4;
    s = kSin[q];
    c = kCos[q];
  } else {
    double rad = degrees * std::numbers::pi / 180.0;
    s = std::sin(rad);
    c = std::cos(rad);
  }
  return {c, s, -s, c, 0, 0};
}

Affine Affine::operator*(const Affine& in) const {
  return {a * in.a + c * in.b,     b * in.a + d * in.b,     a * in.c + c * in.d,
          b * in.c + d * in.d,     a * in.e + c * in.f + e, b * in.e + d * in.f + f};
}

namespace {

int int_param(const Node& n, std::string_view name) {
  return static_cast<int>(std::get<Decimal>(n.param(name)).round_half_up());
}

double real_param(const Node& n, std::string_view name) { return std::get<Decimal>(n.param(name)).to_double(); }

FragmentSet run_fragmenter(const Node& n, const CanvasSpec& canvas, Seed seed) {
  switch (n.kind) {
    case NodeKind::grid: return split_grid(canvas, int_param(n, "rows"), int_param(n, "cols"));
    case NodeKind::brick:
      return split_brick(canvas, int_param(n, "rows"), int_param(n, "cols"), real_param(n, "offset"));
    case NodeKind::stripes: {
      const auto& orient = std::get<Ident>(n.param("orientation")).name;
      return split_stripes(canvas, int_param(n, "count"),
                           orient == "vertical" ? Orientation::vertical : Orientation::horizontal);
    }
    case NodeKind::voronoi: {
      Seed site_seed = derive_seed(seed, "voronoi", static_cast<std::uint64_t>(int_param(n, "salt")));
      return split_voronoi(canvas, int_param(n, "sites"), site_seed, int_param(n, "relax"));
    }
    default: throw Error(ErrorCode::kind_mismatch, "not a fragmenter");
  }
}

FieldExpr as_field(const Value& v) {
  if (const FieldExpr* f = std::get_if<FieldExpr>(&v)) return *f;
  if (const Decimal* d = std::get_if<Decimal>(&v)) return ConstField{*d};
  if (const Color* c = std::get_if<Color>(&v)) return ConstField{*c};
  throw Error(ErrorCode::field_type, "parameter is not a number or color");
}

FragmentSet fragment_layer(const Layer& layer, std::size_t li, const CanvasSpec& canvas, Seed seed) {
  FragmentSet fs;
  try {
    fs = run_fragmenter(layer.fragmenter, canvas, seed);
  } catch (const Error& e) {
    throw e.with_path(node_path(li, Slot::fragmenter).str());
  }
  for (std::size_t j = 0; j < layer.merges.size(); ++j) {
    try {
      fs = merge_fragments(fs, as_field(layer.merges[j].param("key")), canvas, seed);
    } catch (const Error& e) {
      throw e.with_path(node_path(li, Slot::merges, j).str());
    }
  }
  return fs;
}

struct Working {
  Polygon polygon;
  double corner_radius = 0;
  bool alive = true;
};

Polygon transform_about_centroid(const Polygon& poly, const Affine& m) {
  Vec2 c = polygon_centroid(poly);
  Affine full = Affine::translate(c.x, c.y) * m * Affine::translate(-c.x, -c.y);
  Polygon out;
  out.reserve(poly.size());
  for (const Vec2& p : poly) out.push_back(full.apply(p));
  return out;
}

constexpr double kMinFragmentArea = 1.0;

void check_deadline(const std::optional<std::chrono::steady_clock::time_point>& deadline) {
  if (deadline && std::chrono::steady_clock::now() > *deadline)
    throw Error(ErrorCode::budget_exceeded, "render budget exhausted");
}

}  // namespace

std::vector<FragmentSet> layer_fragments(const Program& p, Seed seed) {
  std::vector<FragmentSet> out;
  for (std::size_t li = 0; li < p.layers.size(); ++li) out.push_back(fragment_layer(p.layers[li], li, p.canvas, seed));
  return out;
}

SceneGraph interpret(const Program& p, Seed seed, const MotifRegistry& motifs,
                     std::optional<std::chrono::steady_clock::time_point> deadline) {
  SceneGraph scene;
  scene.canvas = p.canvas;
  std::set<std::string> used_motifs;

  for (std::size_t li = 0; li < p.layers.size(); ++li) {
    check_deadline(deadline);
    const Layer& layer = p.layers[li];
    const double opacity = layer.opacity.to_double();
    FragmentSet fs = fragment_layer(layer, li, p.canvas, seed);

    std::vector<Working> work;
    for (const Fragment& f : fs.fragments) work.push_back({f.boundary, 0, true});

    for (std::size_t j = 0; j < layer.fragment_ops.size(); ++j) {
      const Node& op = layer.fragment_ops[j];
      const std::string path = node_path(li, Slot::fragment_ops, j).str();
      try {
        for (std::size_t i = 0; i < work.size(); ++i) {
          Working& w = work[i];
          if (!w.alive) continue;
          FieldContext ctx = field_context(fs, i, p.canvas, seed);
          switch (op.kind) {
            case NodeKind::inset:
              w.polygon = polygon_inset(w.polygon, eval_number(op.param("distance"), ctx));
              break;
            case NodeKind::scale: {
              double k = eval_number(op.param("factor"), ctx);
              w.polygon = transform_about_centroid(w.polygon, Affine::scale(k, k));
              w.corner_radius *= k;
              break;
            }
            case NodeKind::rotate:
              w.polygon = transform_about_centroid(w.polygon, Affine::rotate_degrees(eval_number(op.param("angle"), ctx)));
              break;
            case NodeKind::round: w.corner_radius = eval_number(op.param("radius"), ctx); break;
            default: throw Error(ErrorCode::kind_mismatch, "not a fragment operation");
          }
          if (w.polygon.size() < 3 || signed_area(w.polygon) < kMinFragmentArea) {
            w.alive = false;
            scene.warnings.push_back({path, "fragment " + std::to_string(fs.fragments[i].id) +
                                                " dropped: area below 1 px^2"});
          }
        }
      } catch (const Error& e) {
        throw e.with_path(path);
      }
    }

    for (std::size_t j = 0; j < layer.styles.size(); ++j) {
      const Node& style = layer.styles[j];
      const std::string path = node_path(li, Slot::style, j).str();
      try {
        const MotifDef* motif = nullptr;
        if (style.kind == NodeKind::place_motif) {
          const std::string& id = std::get<Text>(style.param("motif")).value;
          motif = motifs.find(id);
          if (!motif) throw Error(ErrorCode::unknown_motif, "unknown motif '" + id + "'");
          used_motifs.insert(id);
        }
        for (std::size_t i = 0; i < work.size(); ++i) {
          const Working& w = work[i];
          if (!w.alive) continue;
          FieldContext ctx = field_context(fs, i, p.canvas, seed);
          switch (style.kind) {
            case NodeKind::fill:
              scene.elements.emplace_back(FilledPath{w.polygon, w.corner_radius, eval_color(style.param("color"), ctx), opacity});
              break;
            case NodeKind::outline:
              scene.elements.emplace_back(StrokedPath{w.polygon, w.corner_radius, eval_color(style.param("color"), ctx),
                                                      eval_number(style.param("width"), ctx), opacity});
              break;
            case NodeKind::place_motif: {
              Rect box = bounding_box(w.polygon);
              double margin = real_param(style, "margin");
              double fit = std::min(box.x1 - box.x0, box.y1 - box.y0) * (1 - 2 * margin);
              double k = fit * eval_number(style.param("scale"), ctx);
              double flip = eval_number(style.param("flip"), ctx) >= 0.5 ? -1.0 : 1.0;
              Vec2 c = polygon_centroid(w.polygon);
              Affine m = Affine::translate(c.x, c.y) * Affine::rotate_degrees(eval_number(style.param("rotate"), ctx)) *
                         Affine::scale(k * flip, k) * Affine::translate(-0.5, -0.5);
              scene.elements.emplace_back(MotifInstance{motif->id, m, eval_color(style.param("color"), ctx), opacity});
              break;
            }
            default: throw Error(ErrorCode::kind_mismatch, "not a style");
          }
        }
      } catch (const Error& e) {
        throw e.with_path(path);
      }
    }
  }
  for (const std::string& id : used_motifs) scene.defs.push_back(*motifs.find(id));
  return scene;
}

CornerFillet corner_fillet(Vec2 prev, Vec2 v, Vec2 next, double radius) {
  Vec2 e1 = v - prev, e2 = next - v;
  double l1 = length(e1), l2 = length(e2);
  double half = std::min(l1, l2) / 2;
  double r = std::min(radius, half);
  double cos_turn = std::clamp(dot(e1, e2) / (l1 * l2), -1.0, 1.0);
  double tan_half = std::tan((std::numbers::pi - std::acos(cos_turn)) / 2);  // half the interior angle
  double t = tan_half > 0 ? r / tan_half : half;
  if (t > half) {
    t = half;
    r = t * tan_half;
  }
  return {v - e1 * (t / l1), v + e2 * (t / l2), r, cross(e1, e2) >= 0};
}

Polygon flatten_outline(const Polygon& poly, double corner_radius, int arc_segments) {
  const std::size_t n = poly.size();
  if (corner_radius <= 0 || n < 3) return poly;
  Polygon out;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 v = poly[i];
    CornerFillet f = corner_fillet(poly[(i + n - 1) % n], v, poly[(i + 1) % n], corner_radius);
    // Quadratic blend through the corner approximates the tangent arc.
    for (int k = 0; k <= arc_segments; ++k) {
      double s = static_cast<double>(k) / arc_segments, u = 1 - s;
      out.push_back(f.in * (u * u) + v * (2 * u * s) + f.out * (s * s));
    }
  }
  return out;
}

PatternImage render(const Program& p, Seed seed, const RenderOptions& opts, const MotifRegistry& motifs) {
  SceneGraph scene = interpret(p, seed, motifs, opts.deadline);
  PatternImage img{emit_svg(scene, opts), std::nullopt};
  if (opts.raster_size) {
    PngRasterizer fallback;
    const Rasterizer& r = opts.rasterizer ? *opts.rasterizer : fallback;
    img.raster = r.rasterize(scene, *opts.raster_size);
  }
  return img;
}

}  // namespace splitweave
