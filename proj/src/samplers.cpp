#include "splitweave/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "splitweave/fields.hpp"

namespace splitweave {

// ---------------------------------------------------------------------------
// Color science.

std::string_view scheme_name(PaletteScheme scheme) {
  static constexpr std::string_view names[] = {"analogous", "complementary", "triadic", "monochrome"};
  return names[static_cast<int>(scheme)];
}

namespace {

double linear(std::uint8_t channel) {
  double c = channel / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double d = 6.0 / 29.0;
  return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
}

}  // namespace

Lab to_lab(Color c) {
  double r = linear(c.r), g = linear(c.g), b = linear(c.b);
  // sRGB primaries, D65 white.
  double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  double fx = lab_f(x), fy = lab_f(y), fz = lab_f(z);
  return {116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)};
}

double delta_e76(Color x, Color y) {
  Lab a = to_lab(x), b = to_lab(y);
  return std::sqrt((a.l - b.l) * (a.l - b.l) + (a.a - b.a) * (a.a - b.a) + (a.b - b.b) * (a.b - b.b));
}

double hue_degrees(Color c) {
  double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  double mx = std::max({r, g, b}), mn = std::min({r, g, b}), d = mx - mn;
  if (d == 0) return 0;
  double h;
  if (mx == r) {
    h = std::fmod((g - b) / d, 6.0);
  } else if (mx == g) {
    h = (b - r) / d + 2;
  } else {
    h = (r - g) / d + 4;
  }
  h *= 60;
  return h < 0 ? h + 360 : h;
}

Color from_hsl(double hue, double saturation, double lightness) {
  hue = std::fmod(hue, 360.0);
  if (hue < 0) hue += 360;
  double c = (1 - std::abs(2 * lightness - 1)) * saturation;
  double hp = hue / 60;
  double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  double m = lightness - c / 2;
  auto q = [&](double v) { return static_cast<std::uint8_t>(std::clamp(std::lround((v + m) * 255), 0L, 255L)); };
  return {q(r), q(g), q(b)};
}

// ---------------------------------------------------------------------------
// Configuration.

const SamplerConfig& default_sampler_config() {
  static const SamplerConfig cfg;
  return cfg;
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::parse, "sampler config: " + msg);
}

class ConfigReader {
 public:
  ConfigReader(const json& obj, std::string section) : obj_(obj), section_(std::move(section)) {
    if (!obj_.is_object()) config_error(section_ + " must be an object");
  }

  void real(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) config_error(where(key) + " must be a number");
      out = v->get<double>();
    }
  }
  void integer(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) config_error(where(key) + " must be an integer");
      out = v->get<int>();
    }
  }
  void range(const char* key, IntRange& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer())
        config_error(where(key) + " must be [min, max] integers");
      out = {(*v)[0].get<int>(), (*v)[1].get<int>()};
      if (out.min > out.max) config_error(where(key) + " has min > max");
    }
  }
  void range(const char* key, RealRange& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
        config_error(where(key) + " must be [min, max] numbers");
      out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
      if (out.min > out.max) config_error(where(key) + " has min > max");
    }
  }
  template <std::size_t N>
  void weights(const char* key, std::array<double, N>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != N) config_error(where(key) + " must list " + std::to_string(N) + " weights");
      for (std::size_t i = 0; i < N; ++i) {
        if (!(*v)[i].is_number() || (*v)[i].get<double>() < 0) config_error(where(key) + " weights must be >= 0");
        out[i] = (*v)[i].get<double>();
      }
    }
  }
  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) config_error("unknown key " + where(key.c_str()));
  }

 private:
  const json* take(const char* key) {
    seen_.emplace_back(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  std::string where(const char* key) const { return section_ + "." + key; }

  const json& obj_;
  std::string section_;
  std::vector<std::string> seen_;
};

void check_probability(double p, const char* name) {
  if (!(p >= 0 && p <= 1)) config_error(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

SamplerConfig parse_sampler_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(e.what());
  }
  SamplerConfig cfg;
  if (!doc.is_object()) config_error("top level must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "palette" && key != "mtp" && key != "sfp") config_error("unknown section " + key);

  if (doc.contains("palette")) {
    ConfigReader r(doc["palette"], "palette");
    r.range("colors", cfg.palette.colors);
    r.real("min_delta_e", cfg.palette.min_delta_e);
    r.integer("attempts", cfg.palette.attempts);
    r.finish();
    if (cfg.palette.colors.min < 3 || cfg.palette.colors.max > 6) config_error("palette.colors must lie in [3, 6]");
  }
  if (doc.contains("mtp")) {
    auto& m = cfg.mtp;
    ConfigReader r(doc["mtp"], "mtp");
    r.weights("fragmenter_weights", m.fragmenter_weights);
    r.range("grid", m.grid);
    r.range("brick_rows", m.brick_rows);
    r.range("brick_cols", m.brick_cols);
    r.range("scale", m.scale);
    r.range("rotate", m.rotate);
    r.weights("field_weights", m.field_weights);
    r.real("outline_probability", m.outline_probability);
    r.real("extra_layer_probability", m.extra_layer_probability);
    r.real("extra_motif_probability", m.extra_motif_probability);
    r.weights("edit_weights", m.edit_weights);
    r.finish();
    check_probability(m.outline_probability, "mtp.outline_probability");
    check_probability(m.extra_layer_probability, "mtp.extra_layer_probability");
    check_probability(m.extra_motif_probability, "mtp.extra_motif_probability");
  }
  if (doc.contains("sfp")) {
    auto& s = cfg.sfp;
    ConfigReader r(doc["sfp"], "sfp");
    r.weights("fragmenter_weights", s.fragmenter_weights);
    r.range("voronoi_sites", s.voronoi_sites);
    r.range("voronoi_relax", s.voronoi_relax);
    r.range("stripes", s.stripes);
    r.range("grid", s.grid);
    r.range("brick_rows", s.brick_rows);
    r.range("brick_cols", s.brick_cols);
    r.real("merge_probability", s.merge_probability);
    r.real("inset_probability", s.inset_probability);
    r.range("inset", s.inset);
    r.real("outline_probability", s.outline_probability);
    r.range("outline_width", s.outline_width);
    r.real("cycle_probability", s.cycle_probability);
    r.weights("edit_weights", s.edit_weights);
    r.finish();
    check_probability(s.merge_probability, "sfp.merge_probability");
    check_probability(s.inset_probability, "sfp.inset_probability");
    check_probability(s.outline_probability, "sfp.outline_probability");
    check_probability(s.cycle_probability, "sfp.cycle_probability");
  }
  return cfg;
}

SamplerConfig load_sampler_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read sampler config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sampler_config(buf.str());
}

// ---------------------------------------------------------------------------
// Palettes.

namespace {

bool legible(const std::vector<Color>& colors, double min_delta_e) {
  for (std::size_t i = 0; i < colors.size(); ++i)
    for (std::size_t j = i + 1; j < colors.size(); ++j)
      if (delta_e76(colors[i], colors[j]) < min_delta_e) return false;
  return true;
}

double hue_gap(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, 360 - d);
}

bool single_hue(const std::vector<Color>& colors) {
  for (std::size_t i = 1; i < colors.size(); ++i)
    if (hue_gap(hue_degrees(colors[0]), hue_degrees(colors[i])) > 1.0) return false;
  return true;
}

double hue_offset(PaletteScheme scheme, std::size_t i) {
  switch (scheme) {
    case PaletteScheme::analogous: {
      static constexpr double offsets[] = {0, 30, -30, 15, -15, 0};
      return offsets[i % 6];
    }
    case PaletteScheme::complementary: return i % 2 == 0 ? 0 : 180;
    case PaletteScheme::triadic: {
      static constexpr double offsets[] = {0, 120, -120};
      return offsets[i % 3];
    }
    case PaletteScheme::monochrome: return 0;
  }
  return 0;
}

bool acceptable(const std::vector<Color>& colors, PaletteScheme scheme, double min_delta_e) {
  return legible(colors, min_delta_e) && (scheme != PaletteScheme::monochrome || single_hue(colors));
}

}  // namespace

Palette sample_palette(Seed seed, const SamplerConfig& cfg) {
  Stream rng(derive_seed(seed, "palette"));
  Palette pal;
  pal.scheme = static_cast<PaletteScheme>(rng.below(4));
  const double base = rng.uniform(0, 360);
  const auto n = static_cast<std::size_t>(rng.range(cfg.palette.colors.min, cfg.palette.colors.max));
  const bool mono = pal.scheme == PaletteScheme::monochrome;

  for (int attempt = 0; attempt < cfg.palette.attempts; ++attempt) {
    std::vector<Color> colors;
    for (std::size_t i = 0; i < n; ++i) {
      double jitter = mono ? 0 : rng.uniform(-6, 6);
      colors.push_back(from_hsl(base + hue_offset(pal.scheme, i) + jitter, rng.uniform(0.45, 0.85),
                                rng.uniform(0.2, 0.85)));
    }
    if (acceptable(colors, pal.scheme, cfg.palette.min_delta_e)) {
      pal.colors = std::move(colors);
      return pal;
    }
  }
  // Widen the lightness spread to evenly spaced steps, dropping colors until
  // the palette is legible.
  for (std::size_t count = n; count >= 3; --count) {
    std::vector<Color> colors;
    for (std::size_t i = 0; i < count; ++i) {
      double lightness = 0.2 + 0.6 * static_cast<double>(i) / static_cast<double>(count - 1);
      colors.push_back(from_hsl(base + hue_offset(pal.scheme, i), 0.7, lightness));
    }
    if (acceptable(colors, pal.scheme, cfg.palette.min_delta_e) || count == 3) {
      pal.colors = std::move(colors);
      return pal;
    }
  }
  return pal;
}

Color darkest(const Palette& palette) {
  return *std::min_element(palette.colors.begin(), palette.colors.end(),
                           [](Color a, Color b) { return to_lab(a).l < to_lab(b).l; });
}

namespace {

Color lightest(const Palette& palette) {
  return *std::max_element(palette.colors.begin(), palette.colors.end(),
                           [](Color a, Color b) { return to_lab(a).l < to_lab(b).l; });
}

std::vector<Color> without(const std::vector<Color>& colors, Color c) {
  std::vector<Color> out;
  for (Color x : colors)
    if (x != c) out.push_back(x);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Field building blocks.

Decimal quantized(double v, double step) { return Decimal::from_double(std::round(v / step) * step); }

FieldShape sample_field_shape(Stream& rng, std::span<const double, 4> weights, AxisAvailability axes) {
  std::array<double, 4> w{weights[0], weights[1], weights[2], weights[3]};
  if (!(axes.row && axes.col)) w[3] = 0;
  return static_cast<FieldShape>(rng.weighted(w));
}

Axis sample_axis(Stream& rng, AxisAvailability axes) {
  std::vector<Axis> options{Axis::id};
  if (axes.row) options.push_back(Axis::row);
  if (axes.col) options.push_back(Axis::col);
  return options[rng.below(options.size())];
}

namespace {

Decimal number_in(Stream& rng, RealRange range, double step) {
  Decimal d = quantized(rng.uniform(range.min, range.max), step);
  return std::clamp(d, quantized(range.min, step), Decimal::from_double(range.max));
}

// Two or more values, consecutive ones distinct when the range allows it.
std::vector<Scalar> distinct_numbers(Stream& rng, std::size_t count, RealRange range, double step) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < count; ++i) {
    Decimal d = number_in(rng, range, step);
    for (int retry = 0; retry < 8 && !out.empty() && std::get<Decimal>(out.back()) == d; ++retry)
      d = number_in(rng, range, step);
    out.emplace_back(d);
  }
  return out;
}

std::vector<Scalar> distinct_colors(Stream& rng, std::size_t count, std::span<const Color> colors) {
  std::vector<Color> pool(colors.begin(), colors.end());
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (pool.empty()) pool.assign(colors.begin(), colors.end());
    std::size_t k = rng.below(pool.size());
    out.emplace_back(pool[k]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

}  // namespace

FieldExpr sample_numeric_field(Stream& rng, FieldShape shape, AxisAvailability axes, RealRange range, double step) {
  switch (shape) {
    case FieldShape::constant: return ConstField{number_in(rng, range, step)};
    case FieldShape::alt: {
      Axis axis = sample_axis(rng, axes);
      return AltField{axis, distinct_numbers(rng, 2 + rng.below(2), range, step)};
    }
    case FieldShape::ramp: {
      Axis axis = sample_axis(rng, axes);
      auto v = distinct_numbers(rng, 2, range, step);
      return RampField{axis, v[0], v[1]};
    }
    case FieldShape::checker: return CheckerField{distinct_numbers(rng, 2, range, step)};
  }
  return ConstField{Decimal{}};
}

FieldExpr sample_color_field(Stream& rng, FieldShape shape, AxisAvailability axes, std::span<const Color> colors) {
  switch (shape) {
    case FieldShape::constant: return ConstField{colors[rng.below(colors.size())]};
    case FieldShape::alt: {
      Axis axis = sample_axis(rng, axes);
      return AltField{axis, distinct_colors(rng, std::min<std::size_t>(2 + rng.below(2), colors.size()), colors)};
    }
    case FieldShape::ramp: {
      Axis axis = sample_axis(rng, axes);
      auto v = distinct_colors(rng, 2, colors);
      return RampField{axis, v[0], v[1]};
    }
    case FieldShape::checker: return CheckerField{distinct_colors(rng, 2, colors)};
  }
  return ConstField{colors[0]};
}

// ---------------------------------------------------------------------------
// Node samplers.

namespace {

Param int_param(const char* name, std::int64_t v) { return {name, Decimal::from_int(v)}; }

Node grid_node(Stream& rng, IntRange range) {
  return make_node(NodeKind::grid, {int_param("rows", rng.range(range.min, range.max)),
                                    int_param("cols", rng.range(range.min, range.max))});
}

Node brick_node(Stream& rng, IntRange rows, IntRange cols) {
  static constexpr double offsets[] = {0.25, 0.5, 0.5, 0.75};
  return make_node(NodeKind::brick, {int_param("rows", rng.range(rows.min, rows.max)),
                                     int_param("cols", rng.range(cols.min, cols.max)),
                                     {"offset", Decimal::from_double(offsets[rng.below(4)])}});
}

}  // namespace

Node sample_mtp_fragmenter(Stream& rng, const SamplerConfig& cfg) {
  const auto& m = cfg.mtp;
  return rng.weighted(m.fragmenter_weights) == 0 ? grid_node(rng, m.grid) : brick_node(rng, m.brick_rows, m.brick_cols);
}

Node sample_sfp_fragmenter(Stream& rng, const SamplerConfig& cfg) {
  const auto& s = cfg.sfp;
  switch (rng.weighted(s.fragmenter_weights)) {
    case 0:
      return make_node(NodeKind::voronoi, {int_param("sites", rng.range(s.voronoi_sites.min, s.voronoi_sites.max)),
                                           int_param("relax", rng.range(s.voronoi_relax.min, s.voronoi_relax.max)),
                                           int_param("salt", rng.range(0, 9999))});
    case 1:
      return make_node(NodeKind::stripes, {int_param("count", rng.range(s.stripes.min, s.stripes.max)),
                                           {"orientation", Ident{rng.chance(0.5) ? "horizontal" : "vertical"}}});
    case 2: return grid_node(rng, s.grid);
    default: return brick_node(rng, s.brick_rows, s.brick_cols);
  }
}

Node sample_place_motif(Stream& rng, const std::string& motif, AxisAvailability axes, std::span<const Color> colors,
                        const SamplerConfig& cfg) {
  const auto& m = cfg.mtp;
  FieldExpr scale = sample_numeric_field(rng, sample_field_shape(rng, m.field_weights, axes), axes, m.scale, 0.05);
  RealRange rotate{m.rotate.min, std::max(m.rotate.min, m.rotate.max - 15)};
  FieldExpr angle = sample_numeric_field(rng, sample_field_shape(rng, m.field_weights, axes), axes, rotate, 15);
  FieldExpr color = sample_color_field(rng, sample_field_shape(rng, m.field_weights, axes), axes, colors);
  return make_node(NodeKind::place_motif, {{"motif", Text{motif}},
                                           {"margin", quantized(rng.uniform(0.05, 0.2), 0.05)},
                                           {"scale", scale},
                                           {"rotate", angle},
                                           {"color", color}});
}

Node sample_outline(Stream& rng, const Palette& palette, const SamplerConfig& cfg) {
  const auto& w = cfg.sfp.outline_width;
  return make_node(NodeKind::outline, {{"color", darkest(palette)}, {"width", number_in(rng, w, 0.5)}});
}

// ---------------------------------------------------------------------------
// Program samplers.

namespace {

std::vector<std::string> motif_ids(const MotifRegistry& motifs) {
  std::vector<std::string> ids;
  for (const MotifDef& m : motifs.all()) ids.push_back(m.id);
  if (ids.empty()) throw Error(ErrorCode::unknown_motif, "motif registry is empty");
  return ids;
}

}  // namespace

Program sample_mtp(Seed seed, const MotifRegistry& motifs, const SamplerConfig& cfg) {
  const auto& m = cfg.mtp;
  Palette palette = sample_palette(derive_seed(seed, "mtp-palette"), cfg);
  Stream rng(derive_seed(seed, "mtp"));
  const std::vector<std::string> ids = motif_ids(motifs);

  Program p;
  p.style_tag = StyleTag::mtp;
  p.canvas = {512, 512, palette.colors[rng.below(palette.colors.size())]};
  const std::vector<Color> ink = without(palette.colors, p.canvas.background);

  auto motif_layer = [&] {
    Layer layer;
    layer.fragmenter = sample_mtp_fragmenter(rng, cfg);
    AxisAvailability axes = fragmenter_axes(layer.fragmenter);
    layer.styles.push_back(sample_place_motif(rng, ids[rng.below(ids.size())], axes, ink, cfg));
    return layer;
  };

  Layer first = motif_layer();
  if (rng.chance(m.outline_probability)) first.styles.push_back(sample_outline(rng, palette, cfg));
  if (rng.chance(m.extra_motif_probability)) {
    AxisAvailability axes = fragmenter_axes(first.fragmenter);
    first.styles.push_back(sample_place_motif(rng, ids[rng.below(ids.size())], axes, ink, cfg));
  }
  p.layers.push_back(std::move(first));
  if (rng.chance(m.extra_layer_probability)) p.layers.push_back(motif_layer());
  return p;
}

Program sample_sfp(Seed seed, const SamplerConfig& cfg) {
  const auto& s = cfg.sfp;
  Palette palette = sample_palette(derive_seed(seed, "sfp-palette"), cfg);
  Stream rng(derive_seed(seed, "sfp"));

  Program p;
  p.style_tag = StyleTag::sfp;
  p.canvas = {512, 512, lightest(palette)};
  const std::vector<Color> ink = without(palette.colors, p.canvas.background);

  Layer layer;
  layer.fragmenter = sample_sfp_fragmenter(rng, cfg);
  if (rng.chance(s.merge_probability)) {
    AxisAvailability axes = fragmenter_axes(layer.fragmenter);
    FieldExpr key;
    if (axes.row && axes.col && rng.chance(0.5)) {
      key = CheckerField{{Decimal::from_int(0), Decimal::from_int(1)}};
    } else {
      Axis axis = sample_axis(rng, axes);
      std::vector<Scalar> values;
      for (std::int64_t k = 0, n = rng.range(2, 3); k < n; ++k) values.emplace_back(Decimal::from_int(k));
      key = AltField{axis, values};
    }
    layer.merges.push_back(make_node(NodeKind::merge, {{"key", key}}));
    Program probe = p;
    probe.layers.push_back(layer);
    try {
      layer_fragments(probe, seed);
    } catch (const Error&) {
      layer.merges.clear();  // topology the merger cannot dissolve
    }
  }

  AxisAvailability axes = post_merge_axes(layer);
  if (rng.chance(s.inset_probability))
    layer.fragment_ops.push_back(make_node(NodeKind::inset, {{"distance", number_in(rng, s.inset, 0.5)}}));

  FieldExpr fill;
  if (rng.chance(s.cycle_probability)) {
    Axis key = sample_axis(rng, axes);
    std::size_t count = 2 + rng.below(ink.size() - 1);
    fill = CycleField{key, distinct_colors(rng, count, ink)};
  } else {
    fill = sample_color_field(rng, FieldShape::ramp, axes, ink);
  }
  layer.styles.push_back(make_node(NodeKind::fill, {{"color", fill}}));
  if (rng.chance(s.outline_probability)) layer.styles.push_back(sample_outline(rng, palette, cfg));
  p.layers.push_back(std::move(layer));
  return p;
}

Program sample_program(StyleTag style, Seed seed, const MotifRegistry& motifs, const SamplerConfig& cfg) {
  switch (style) {
    case StyleTag::mtp: return sample_mtp(seed, motifs, cfg);
    case StyleTag::sfp: return sample_sfp(seed, cfg);
    default: throw Error(ErrorCode::range, "no sampler for style '" + std::string(style_tag_name(style)) + "'");
  }
}

}  // namespace splitweave
