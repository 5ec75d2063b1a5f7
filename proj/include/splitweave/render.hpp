#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "splitweave/ast.hpp"
#include "splitweave/geometry.hpp"
#include "splitweave/rng.hpp"

namespace splitweave {

// ---------------------------------------------------------------------------
// Motifs.

enum class MotifSource { builtin, user_file };

/// A vector motif normalized to the unit box. Contours fill with the
/// even-odd rule so rings and cut-outs need no special casing.
struct MotifDef {
  std::string id;
  MotifSource source = MotifSource::builtin;
  std::vector<Polygon> contours;
};

class MotifRegistry {
 public:
  static MotifRegistry builtins();

  const MotifDef* find(std::string_view id) const;
  // Sorted by id.
  std::span<const MotifDef> all() const { return motifs_; }
  std::vector<std::string> builtin_ids() const;

  void add(MotifDef def);

 private:
  std::vector<MotifDef> motifs_;
};

// Builtins plus every *.svg under `dir` (ignored when empty). User motifs are
// registered as "user/<file stem>". Throws Error(motif_parse) naming every
// file that fails to load.
MotifRegistry load_motif_library(const std::filesystem::path& dir);

// Parses the single outline of an SVG motif file.
Polygon parse_motif_svg(std::string_view svg_text);

// ---------------------------------------------------------------------------
// Scene graph.

/// SVG matrix(a b c d e f): x' = a x + c y + e, y' = b x + d y + f.
struct Affine {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  static Affine translate(double x, double y) { return {1, 0, 0, 1, x, y}; }
  static Affine scale(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }
  static Affine rotate_degrees(double degrees);

  Vec2 apply(Vec2 p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
  // (*this) after `inner`.
  Affine operator*(const Affine& inner) const;
};

struct FilledPath {
  Polygon polygon;
  double corner_radius = 0;
  Color fill;
  double opacity = 1;
};

struct StrokedPath {
  Polygon polygon;
  double corner_radius = 0;
  Color stroke;
  double width = 1;
  double opacity = 1;
};

struct MotifInstance {
  std::string motif_id;
  Affine transform;
  std::optional<Color> fill;
  double opacity = 1;
};

using SceneElement = std::variant<FilledPath, StrokedPath, MotifInstance>;

struct SceneGraph {
  CanvasSpec canvas;
  std::vector<MotifDef> defs;         // sorted by id
  std::vector<SceneElement> elements;  // paint order
  std::vector<Diagnostic> warnings;
};

/// Interprets a validated program. Errors carry the offending node path.
SceneGraph interpret(const Program& p, Seed seed, const MotifRegistry& motifs,
                     std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

// Fragment sets per layer after fragmenting and merging.
std::vector<FragmentSet> layer_fragments(const Program& p, Seed seed);

/// Rounded corner at `v`: arc of radius `radius`, shrunk when its tangent
/// points would pass the middle of an incident edge.
struct CornerFillet {
  Vec2 in, out;   // tangent points on the incoming and outgoing edge
  double radius;  // arc radius actually used
  bool convex;    // turn direction matches positive orientation
};
CornerFillet corner_fillet(Vec2 prev, Vec2 v, Vec2 next, double radius);

// Polyline approximation of a path with rounded corners (used for raster output).
Polygon flatten_outline(const Polygon& poly, double corner_radius, int arc_segments = 8);

// ---------------------------------------------------------------------------
// Output.

class Rasterizer {
 public:
  virtual ~Rasterizer() = default;
  // Encoded image bytes for the scene at `size` pixels wide.
  virtual std::vector<std::uint8_t> rasterize(const SceneGraph& scene, int size) const = 0;
};

/// Scanline rasterizer with 4x vertical supersampling, emitting 8-bit RGB PNG.
class PngRasterizer final : public Rasterizer {
 public:
  std::vector<std::uint8_t> rasterize(const SceneGraph& scene, int size) const override;
};

struct RenderOptions {
  int precision = 3;
  std::optional<int> raster_size;
  const Rasterizer* rasterizer = nullptr;  // PngRasterizer when unset
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

std::string emit_svg(const SceneGraph& scene, const RenderOptions& opts = {});

struct PatternImage {
  std::string svg;
  std::optional<std::vector<std::uint8_t>> raster;
};

PatternImage render(const Program& p, Seed seed, const RenderOptions& opts, const MotifRegistry& motifs);

// Width and height of a PNG produced by PngRasterizer.
std::pair<int, int> png_dimensions(std::span<const std::uint8_t> png);

/// Lerps every numeric and color literal of two structurally identical
/// programs. Integer slots round half up.
Program interpolate_programs(const Program& p, const Program& q, double t);

}  // namespace splitweave
