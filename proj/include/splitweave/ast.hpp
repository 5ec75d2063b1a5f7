#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "splitweave/error.hpp"
#include "splitweave/values.hpp"

namespace splitweave {

// ---------------------------------------------------------------------------
// Field expressions: per-fragment parameter maps.

enum class Axis { row, col, id };

std::string_view axis_name(Axis axis);
std::optional<Axis> parse_axis(std::string_view name);

using Scalar = std::variant<Decimal, Color>;

struct ConstField {
  Scalar value;
  bool operator==(const ConstField&) const = default;
};
struct AltField {
  Axis axis = Axis::id;
  std::vector<Scalar> values;
  bool operator==(const AltField&) const = default;
};
struct RampField {
  Axis axis = Axis::id;
  Scalar from;
  Scalar to;
  bool operator==(const RampField&) const = default;
};
struct CheckerField {
  std::vector<Scalar> values;  // exactly two once validated
  bool operator==(const CheckerField&) const = default;
};
struct RadialField {
  Decimal center_x = Decimal::from_micros(500'000);
  Decimal center_y = Decimal::from_micros(500'000);
  Scalar from;
  Scalar to;
  bool operator==(const RadialField&) const = default;
};
struct CycleField {
  Axis key = Axis::id;
  std::vector<Scalar> values;
  bool operator==(const CycleField&) const = default;
};
struct JitterField {
  Decimal salt;
  Scalar min;
  Scalar max;
  bool operator==(const JitterField&) const = default;
};

using FieldExpr = std::variant<ConstField, AltField, RampField, CheckerField, RadialField, CycleField, JitterField>;

std::string_view field_kind_name(const FieldExpr& field);

// ---------------------------------------------------------------------------
// Literals and parameter values.

struct Ident {
  std::string name;
  bool operator==(const Ident&) const = default;
};
struct Text {
  std::string value;
  bool operator==(const Text&) const = default;
};

using Value = std::variant<Decimal, Color, Ident, Text, FieldExpr>;

enum class ValueClass { numeric, color, ident, text };

// Class of a literal, or of a field's scalars. Empty for mixed or empty fields.
std::optional<ValueClass> value_class(const Value& value);

// ---------------------------------------------------------------------------
// Nodes.

enum class NodeKind { grid, brick, stripes, voronoi, merge, inset, scale, rotate, round, fill, outline, place_motif };
enum class NodeFamily { fragmenter, merge, fragop, style };

std::string_view kind_name(NodeKind kind);
std::optional<NodeKind> parse_kind(std::string_view name);
NodeFamily family_of(NodeKind kind);
std::string_view family_name(NodeFamily family);

enum class ParamType { integer, real, color, enumeration, text };

struct ParamSpec {
  std::string_view name;
  ParamType type;
  double min = 0;
  double max = 0;
  bool max_exclusive = false;
  bool field_allowed = false;
  Value fallback;
  std::vector<std::string_view> choices;  // enumeration only
};

// Parameter table of a node kind, in canonical print order.
std::span<const ParamSpec> param_specs(NodeKind kind);
const ParamSpec* find_param_spec(NodeKind kind, std::string_view name);

struct Param {
  std::string name;
  Value value;
  bool operator==(const Param&) const = default;
};

struct Node {
  NodeKind kind = NodeKind::grid;
  std::vector<Param> params;  // complete and in canonical order

  const Value& param(std::string_view name) const;
  Value* find(std::string_view name);
  const Value* find(std::string_view name) const;

  bool operator==(const Node&) const = default;
};

// A node with every parameter at its default, overridden by `overrides`.
Node make_node(NodeKind kind, std::vector<Param> overrides = {});

// Slot arity limits.
inline constexpr std::size_t kMaxLayers = 8;
inline constexpr std::size_t kMaxMerges = 2;
inline constexpr std::size_t kMaxFragmentOps = 4;
inline constexpr std::size_t kMinStyles = 1;
inline constexpr std::size_t kMaxStyles = 3;

struct Layer {
  Node fragmenter = make_node(NodeKind::grid);
  std::vector<Node> merges;
  std::vector<Node> fragment_ops;
  std::vector<Node> styles;
  Decimal opacity = Decimal::from_int(1);

  bool operator==(const Layer&) const = default;
};

struct CanvasSpec {
  std::int64_t width = 512;
  std::int64_t height = 512;
  Color background{255, 255, 255};

  bool operator==(const CanvasSpec&) const = default;
};

enum class StyleTag { mtp, sfp, custom };

std::string_view style_tag_name(StyleTag tag);
std::optional<StyleTag> parse_style_tag(std::string_view name);

struct Program {
  std::int64_t version = 1;
  CanvasSpec canvas;
  std::vector<Layer> layers;
  StyleTag style_tag = StyleTag::custom;

  bool operator==(const Program&) const = default;
};

// Structural equality; numeric literals compare in canonical decimal form.
bool ast_equals(const Program& a, const Program& b);

// ---------------------------------------------------------------------------
// Addressing.

enum class Slot { none, canvas, fragmenter, merges, fragment_ops, style };

/// Textual address of a subtree: /layer[i]/<slot>[j]/param[name], or
/// /canvas/param[name]. The fragmenter slot carries no index.
struct NodePath {
  std::optional<std::size_t> layer;
  Slot slot = Slot::none;
  std::size_t index = 0;
  std::optional<std::string> param;

  static NodePath parse(std::string_view text);  // throws Error(path_not_found) when malformed
  std::string str() const;

  bool operator==(const NodePath&) const = default;
};

NodePath layer_path(std::size_t layer);
NodePath node_path(std::size_t layer, Slot slot, std::size_t index = 0);
NodePath param_path(NodePath node, std::string name);

using Subtree = std::variant<Layer, Node, Value>;

Subtree resolve_path(const Program& p, const NodePath& path);
Program substitute(const Program& p, const NodePath& path, const Subtree& subtree);

// ---------------------------------------------------------------------------
// Validation.

struct AxisAvailability {
  bool row = false;
  bool col = false;
};

// Axes a field may reference at fragment-op/style slots of `layer`.
AxisAvailability post_merge_axes(const Layer& layer);
// Axes a merge key may reference.
AxisAvailability fragmenter_axes(const Node& fragmenter);

std::vector<Diagnostic> validate(const Program& p);

}  // namespace splitweave
