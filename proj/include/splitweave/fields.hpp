#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "splitweave/ast.hpp"
#include "splitweave/geometry.hpp"
#include "splitweave/rng.hpp"

namespace splitweave {

struct FieldContext {
  const Fragment& fragment;
  int fragment_count = 1;
  std::optional<int> row_count;
  std::optional<int> col_count;
  CanvasSpec canvas;
  Seed program_seed = 0;
};

// Context for fragment `index` of `fs`, with row/col counts when available.
FieldContext field_context(const FragmentSet& fs, std::size_t index, const CanvasSpec& canvas, Seed seed);

Scalar eval_field(const FieldExpr& field, const FieldContext& ctx);

// Evaluates a parameter value: literals pass through, fields are evaluated.
Scalar eval_value(const Value& value, const FieldContext& ctx);
double eval_number(const Value& value, const FieldContext& ctx);
Color eval_color(const Value& value, const FieldContext& ctx);

struct NumericRange {
  double min = 0;
  double max = 0;
  bool operator==(const NumericRange&) const = default;
};
using FieldRange = std::variant<NumericRange, std::vector<Color>>;

// Conservative bounds over every value eval_field can produce.
FieldRange field_range(const FieldExpr& field);

// Uniform draw in [0, 1) keyed by (program seed, salt, fragment id).
double jitter_unit(Seed program_seed, std::int64_t salt, int fragment_id);

// Merges `fs` by an integer-valued key field.
FragmentSet merge_fragments(const FragmentSet& fs, const FieldExpr& key, const CanvasSpec& canvas, Seed seed);

}  // namespace splitweave
