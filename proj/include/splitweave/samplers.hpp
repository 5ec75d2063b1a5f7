#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "splitweave/ast.hpp"
#include "splitweave/render.hpp"
#include "splitweave/rng.hpp"

namespace splitweave {

// ---------------------------------------------------------------------------
// Palettes.

enum class PaletteScheme { analogous, complementary, triadic, monochrome };

std::string_view scheme_name(PaletteScheme scheme);

struct Palette {
  std::vector<Color> colors;  // 3 to 6, pairwise CIE76 distance >= 10
  PaletteScheme scheme = PaletteScheme::analogous;
};

struct Lab {
  double l = 0, a = 0, b = 0;
};

Lab to_lab(Color c);
double delta_e76(Color x, Color y);
// Hue in degrees [0, 360); 0 for grays.
double hue_degrees(Color c);
// HSL components in [0, 1] (hue in degrees).
Color from_hsl(double hue, double saturation, double lightness);

// ---------------------------------------------------------------------------
// Sampler configuration. Every range and weight the samplers use lives here;
// a JSON file may override any subset of the keys (see README).

struct IntRange {
  int min = 0;
  int max = 0;
};
struct RealRange {
  double min = 0;
  double max = 0;
};

struct SamplerConfig {
  struct PaletteTable {
    IntRange colors{3, 6};
    double min_delta_e = 10;
    int attempts = 32;
  } palette;

  struct MtpTable {
    std::array<double, 2> fragmenter_weights{0.6, 0.4};  // grid, brick
    IntRange grid{2, 8};
    IntRange brick_rows{2, 6};
    IntRange brick_cols{2, 6};
    RealRange scale{0.4, 1.2};
    RealRange rotate{0, 360};
    std::array<double, 4> field_weights{0.4, 0.25, 0.2, 0.15};  // const, alt, ramp, checker
    double outline_probability = 0.35;
    double extra_layer_probability = 0.15;
    double extra_motif_probability = 0.2;
    // replace motif, replace scale, replace rotate, replace color, insert outline,
    // remove outline, insert place-motif, remove place-motif #1, insert layer
    std::array<double, 9> edit_weights{0.16, 0.12, 0.12, 0.12, 0.1, 0.1, 0.1, 0.08, 0.1};
  } mtp;

  struct SfpTable {
    std::array<double, 4> fragmenter_weights{0.35, 0.2, 0.25, 0.2};  // voronoi, stripes, grid, brick
    IntRange voronoi_sites{6, 40};
    IntRange voronoi_relax{0, 2};
    IntRange stripes{3, 16};
    IntRange grid{2, 8};
    IntRange brick_rows{2, 6};
    IntRange brick_cols{2, 6};
    double merge_probability = 0.3;
    double inset_probability = 0.5;
    RealRange inset{0, 8};
    double outline_probability = 0.5;
    RealRange outline_width{1, 4};
    double cycle_probability = 0.6;  // otherwise ramp
    // replace fragmenter, replace fill color, insert outline, remove outline, replace merge key
    std::array<double, 5> edit_weights{0.25, 0.25, 0.2, 0.15, 0.15};
  } sfp;
};

const SamplerConfig& default_sampler_config();
// Defaults overridden by the keys of a JSON document; unknown keys are errors.
SamplerConfig parse_sampler_config(std::string_view json_text);
SamplerConfig load_sampler_config(const std::filesystem::path& file);

Palette sample_palette(Seed seed, const SamplerConfig& cfg = default_sampler_config());

Program sample_mtp(Seed seed, const MotifRegistry& motifs, const SamplerConfig& cfg = default_sampler_config());
Program sample_sfp(Seed seed, const SamplerConfig& cfg = default_sampler_config());
Program sample_program(StyleTag style, Seed seed, const MotifRegistry& motifs,
                       const SamplerConfig& cfg = default_sampler_config());

// ---------------------------------------------------------------------------
// Building blocks shared with the edit sampler.

// Rounds to a multiple of `step`.
Decimal quantized(double v, double step);

enum class FieldShape { constant, alt, ramp, checker };

FieldShape sample_field_shape(Stream& rng, std::span<const double, 4> weights, AxisAvailability axes);
Axis sample_axis(Stream& rng, AxisAvailability axes);
FieldExpr sample_numeric_field(Stream& rng, FieldShape shape, AxisAvailability axes, RealRange range, double step);
FieldExpr sample_color_field(Stream& rng, FieldShape shape, AxisAvailability axes, std::span<const Color> colors);

Node sample_mtp_fragmenter(Stream& rng, const SamplerConfig& cfg);
Node sample_sfp_fragmenter(Stream& rng, const SamplerConfig& cfg);
Node sample_place_motif(Stream& rng, const std::string& motif, AxisAvailability axes, std::span<const Color> colors,
                        const SamplerConfig& cfg);
Node sample_outline(Stream& rng, const Palette& palette, const SamplerConfig& cfg);

// Palette color with the lowest lightness.
Color darkest(const Palette& palette);

}  // namespace splitweave
