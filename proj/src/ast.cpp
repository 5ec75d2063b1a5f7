#include "splitweave/ast.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace splitweave {

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::row: return "row";
    case Axis::col: return "col";
    case Axis::id: return "id";
  }
  return "id";
}

std::optional<Axis> parse_axis(std::string_view name) {
  if (name == "row") return Axis::row;
  if (name == "col") return Axis::col;
  if (name == "id") return Axis::id;
  return std::nullopt;
}

std::string_view field_kind_name(const FieldExpr& field) {
  static constexpr std::array<std::string_view, 7> names{"const", "alt", "ramp", "checker", "radial", "cycle", "jitter"};
  return names[field.index()];
}

namespace {

std::optional<ValueClass> scalar_class(const Scalar& s) {
  return std::holds_alternative<Decimal>(s) ? ValueClass::numeric : ValueClass::color;
}

std::optional<ValueClass> common_class(std::initializer_list<const Scalar*> scalars) {
  std::optional<ValueClass> out;
  for (const Scalar* s : scalars) {
    auto c = scalar_class(*s);
    if (out && out != c) return std::nullopt;
    out = c;
  }
  return out;
}

std::optional<ValueClass> list_class(const std::vector<Scalar>& values) {
  if (values.empty()) return std::nullopt;
  std::optional<ValueClass> out = scalar_class(values.front());
  for (const Scalar& s : values)
    if (scalar_class(s) != out) return std::nullopt;
  return out;
}

}  // namespace

std::optional<ValueClass> value_class(const Value& value) {
  struct Visitor {
    std::optional<ValueClass> operator()(const Decimal&) const { return ValueClass::numeric; }
    std::optional<ValueClass> operator()(const Color&) const { return ValueClass::color; }
    std::optional<ValueClass> operator()(const Ident&) const { return ValueClass::ident; }
    std::optional<ValueClass> operator()(const Text&) const { return ValueClass::text; }
    std::optional<ValueClass> operator()(const FieldExpr& f) const {
      return std::visit(
          [](const auto& field) -> std::optional<ValueClass> {
            using T = std::decay_t<decltype(field)>;
            if constexpr (std::is_same_v<T, ConstField>) {
              return scalar_class(field.value);
            } else if constexpr (std::is_same_v<T, RampField> || std::is_same_v<T, RadialField>) {
              return common_class({&field.from, &field.to});
            } else if constexpr (std::is_same_v<T, JitterField>) {
              return common_class({&field.min, &field.max});
            } else {
              return list_class(field.values);
            }
          },
          f);
    }
  };
  return std::visit(Visitor{}, value);
}

// ---------------------------------------------------------------------------

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::grid: return "grid";
    case NodeKind::brick: return "brick";
    case NodeKind::stripes: return "stripes";
    case NodeKind::voronoi: return "voronoi";
    case NodeKind::merge: return "merge";
    case NodeKind::inset: return "inset";
    case NodeKind::scale: return "scale";
    case NodeKind::rotate: return "rotate";
    case NodeKind::round: return "round";
    case NodeKind::fill: return "fill";
    case NodeKind::outline: return "outline";
    case NodeKind::place_motif: return "place-motif";
  }
  return "grid";
}

std::optional<NodeKind> parse_kind(std::string_view name) {
  static constexpr std::array kinds{NodeKind::grid,  NodeKind::brick, NodeKind::stripes, NodeKind::voronoi,
                                    NodeKind::merge, NodeKind::inset, NodeKind::scale,   NodeKind::rotate,
                                    NodeKind::round, NodeKind::fill,  NodeKind::outline, NodeKind::place_motif};
  for (NodeKind k : kinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

NodeFamily family_of(NodeKind kind) {
  switch (kind) {
    case NodeKind::grid:
    case NodeKind::brick:
    case NodeKind::stripes:
    case NodeKind::voronoi: return NodeFamily::fragmenter;
    case NodeKind::merge: return NodeFamily::merge;
    case NodeKind::inset:
    case NodeKind::scale:
    case NodeKind::rotate:
    case NodeKind::round: return NodeFamily::fragop;
    case NodeKind::fill:
    case NodeKind::outline:
    case NodeKind::place_motif: return NodeFamily::style;
  }
  return NodeFamily::style;
}

std::string_view family_name(NodeFamily family) {
  switch (family) {
    case NodeFamily::fragmenter: return "fragmenter";
    case NodeFamily::merge: return "merge";
    case NodeFamily::fragop: return "fragop";
    case NodeFamily::style: return "style";
  }
  return "style";
}

std::string_view style_tag_name(StyleTag tag) {
  switch (tag) {
    case StyleTag::mtp: return "mtp";
    case StyleTag::sfp: return "sfp";
    case StyleTag::custom: return "custom";
  }
  return "custom";
}

std::optional<StyleTag> parse_style_tag(std::string_view name) {
  if (name == "mtp") return StyleTag::mtp;
  if (name == "sfp") return StyleTag::sfp;
  if (name == "custom") return StyleTag::custom;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parameter tables. Order here is the canonical print order.

namespace {

Value num(double v) { return Decimal::from_double(v); }
Value col(std::uint8_t r, std::uint8_t g, std::uint8_t b) { return Color{r, g, b}; }

const std::map<NodeKind, std::vector<ParamSpec>>& spec_table() {
  static const std::map<NodeKind, std::vector<ParamSpec>> table = [] {
    using T = ParamType;
    std::map<NodeKind, std::vector<ParamSpec>> t;
    t[NodeKind::grid] = {
        {"rows", T::integer, 1, 64, false, false, num(2), {}},
        {"cols", T::integer, 1, 64, false, false, num(2), {}},
    };
    t[NodeKind::brick] = {
        {"rows", T::integer, 1, 64, false, false, num(4), {}},
        {"cols", T::integer, 1, 64, false, false, num(4), {}},
        {"offset", T::real, 0, 1, true, false, num(0.5), {}},
    };
    t[NodeKind::stripes] = {
        {"count", T::integer, 1, 128, false, false, num(4), {}},
        {"orientation", T::enumeration, 0, 0, false, false, Ident{"horizontal"}, {"horizontal", "vertical"}},
    };
    t[NodeKind::voronoi] = {
        {"sites", T::integer, 2, 256, false, false, num(16), {}},
        {"relax", T::integer, 0, 5, false, false, num(0), {}},
        {"salt", T::integer, 0, 2147483647.0, false, false, num(0), {}},
    };
    t[NodeKind::merge] = {
        {"key", T::integer, 0, 1'000'000, false, true, num(0), {}},
    };
    t[NodeKind::inset] = {
        {"distance", T::real, 0, 256, false, true, num(4), {}},
    };
    t[NodeKind::scale] = {
        {"factor", T::real, 0.05, 4, false, true, num(1), {}},
    };
    t[NodeKind::rotate] = {
        {"angle", T::real, -360, 360, false, true, num(0), {}},
    };
    t[NodeKind::round] = {
        {"radius", T::real, 0, 256, false, true, num(4), {}},
    };
    t[NodeKind::fill] = {
        {"color", T::color, 0, 0, false, true, col(128, 128, 128), {}},
    };
    t[NodeKind::outline] = {
        {"color", T::color, 0, 0, false, true, col(0, 0, 0), {}},
        {"width", T::real, 0.1, 64, false, true, num(1), {}},
    };
    t[NodeKind::place_motif] = {
        {"motif", T::text, 0, 0, false, false, Text{"circle"}, {}},
        {"margin", T::real, 0, 0.45, false, false, num(0.1), {}},
        {"scale", T::real, 0.05, 4, false, true, num(1), {}},
        {"rotate", T::real, -360, 360, false, true, num(0), {}},
        {"flip", T::real, 0, 1, false, true, num(0), {}},
        {"color", T::color, 0, 0, false, true, col(0, 0, 0), {}},
    };
    return t;
  }();
  return table;
}

}  // namespace

std::span<const ParamSpec> param_specs(NodeKind kind) { return spec_table().at(kind); }

const ParamSpec* find_param_spec(NodeKind kind, std::string_view name) {
  for (const ParamSpec& s : param_specs(kind))
    if (s.name == name) return &s;
  return nullptr;
}

const Value& Node::param(std::string_view name) const {
  if (const Value* v = find(name)) return *v;
  throw Error(ErrorCode::path_not_found, "node '" + std::string(kind_name(kind)) + "' has no parameter '" +
                                             std::string(name) + "'");
}

Value* Node::find(std::string_view name) {
  for (Param& p : params)
    if (p.name == name) return &p.value;
  return nullptr;
}

const Value* Node::find(std::string_view name) const {
  for (const Param& p : params)
    if (p.name == name) return &p.value;
  return nullptr;
}

Node make_node(NodeKind kind, std::vector<Param> overrides) {
  Node node;
  node.kind = kind;
  for (const ParamSpec& s : param_specs(kind)) {
    auto it = std::find_if(overrides.begin(), overrides.end(), [&](const Param& p) { return p.name == s.name; });
    node.params.push_back(Param{std::string(s.name), it != overrides.end() ? it->value : s.fallback});
  }
  return node;
}

bool ast_equals(const Program& a, const Program& b) { return a == b; }

// ---------------------------------------------------------------------------
// Paths.

namespace {

std::string_view slot_name(Slot slot) {
  switch (slot) {
    case Slot::none: return "";
    case Slot::canvas: return "canvas";
    case Slot::fragmenter: return "fragmenter";
    case Slot::merges: return "merges";
    case Slot::fragment_ops: return "fragmentOps";
    case Slot::style: return "style";
  }
  return "";
}

[[noreturn]] void bad_path(std::string_view text, std::string_view why) {
  throw Error(ErrorCode::path_not_found, "malformed path '" + std::string(text) + "': " + std::string(why));
}

// Splits "name[idx]" into name and optional bracket content.
std::pair<std::string_view, std::optional<std::string_view>> split_segment(std::string_view seg, std::string_view full) {
  auto open = seg.find('[');
  if (open == std::string_view::npos) return {seg, std::nullopt};
  if (seg.back() != ']') bad_path(full, "unterminated index");
  return {seg.substr(0, open), seg.substr(open + 1, seg.size() - open - 2)};
}

std::size_t parse_index(std::string_view digits, std::string_view full) {
  std::size_t v = 0;
  if (digits.empty()) bad_path(full, "empty index");
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) bad_path(full, "index is not a non-negative integer");
  return v;
}

}  // namespace

NodePath NodePath::parse(std::string_view text) {
  NodePath path;
  if (text.empty() || text.front() != '/') bad_path(text, "must start with '/'");
  std::vector<std::string_view> segments;
  std::size_t pos = 1;
  while (pos <= text.size()) {
    auto next = text.find('/', pos);
    if (next == std::string_view::npos) next = text.size();
    segments.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  std::size_t i = 0;
  auto [head, head_idx] = split_segment(segments[i], text);
  if (head == "canvas" && !head_idx) {
    path.slot = Slot::canvas;
    ++i;
  } else if (head == "layer" && head_idx) {
    path.layer = parse_index(*head_idx, text);
    ++i;
    if (i < segments.size()) {
      auto [name, idx] = split_segment(segments[i], text);
      if (name == "fragmenter") {
        if (idx && parse_index(*idx, text) != 0) bad_path(text, "a layer has one fragmenter");
        path.slot = Slot::fragmenter;
        ++i;
      } else if (name == "merges" || name == "fragmentOps" || name == "style") {
        path.slot = name == "merges" ? Slot::merges : name == "style" ? Slot::style : Slot::fragment_ops;
        path.index = idx ? parse_index(*idx, text) : 0;
        ++i;
      }
    }
  } else {
    bad_path(text, "expected /layer[i] or /canvas");
  }
  if (i < segments.size()) {
    auto [name, idx] = split_segment(segments[i], text);
    if (name != "param" || !idx || idx->empty()) bad_path(text, "expected param[name]");
    path.param = std::string(*idx);
    ++i;
  }
  if (i != segments.size()) bad_path(text, "trailing segments");
  if (path.slot == Slot::canvas && !path.param) bad_path(text, "canvas paths must address a parameter");
  return path;
}

std::string NodePath::str() const {
  std::string out;
  if (slot == Slot::canvas) {
    out = "/canvas";
  } else if (layer) {
    out = "/layer[" + std::to_string(*layer) + "]";
    if (slot == Slot::fragmenter) {
      out += "/fragmenter";
    } else if (slot != Slot::none) {
      out += "/" + std::string(slot_name(slot)) + "[" + std::to_string(index) + "]";
    }
  }
  if (param) out += "/param[" + *param + "]";
  return out;
}

NodePath layer_path(std::size_t layer) {
  NodePath p;
  p.layer = layer;
  return p;
}

NodePath node_path(std::size_t layer, Slot slot, std::size_t index) {
  NodePath p;
  p.layer = layer;
  p.slot = slot;
  p.index = index;
  return p;
}

NodePath param_path(NodePath node, std::string name) {
  node.param = std::move(name);
  return node;
}

namespace {

[[noreturn]] void not_found(const NodePath& path) {
  throw Error(ErrorCode::path_not_found, "no subtree at " + path.str(), path.str());
}

// Resolves the node addressed by `path` ignoring any param component.
template <typename LayerT>
auto* locate_node(LayerT& layer, const NodePath& path) {
  using NodeT = std::conditional_t<std::is_const_v<LayerT>, const Node, Node>;
  NodeT* node = nullptr;
  auto pick = [&](auto& list) {
    if (path.index < list.size()) node = &list[path.index];
  };
  switch (path.slot) {
    case Slot::fragmenter: node = &layer.fragmenter; break;
    case Slot::merges: pick(layer.merges); break;
    case Slot::fragment_ops: pick(layer.fragment_ops); break;
    case Slot::style: pick(layer.styles); break;
    default: break;
  }
  if (!node) not_found(path);
  return node;
}

Value canvas_value(const CanvasSpec& c, std::string_view name) {
  if (name == "width") return Decimal::from_int(c.width);
  if (name == "height") return Decimal::from_int(c.height);
  if (name == "background") return c.background;
  throw Error(ErrorCode::path_not_found, "canvas has no parameter '" + std::string(name) + "'");
}

[[noreturn]] void mismatch(const NodePath& path, std::string_view why) {
  throw Error(ErrorCode::kind_mismatch, "cannot place subtree at " + path.str() + ": " + std::string(why), path.str());
}

std::optional<ValueClass> spec_class(const ParamSpec& spec) {
  switch (spec.type) {
    case ParamType::integer:
    case ParamType::real: return ValueClass::numeric;
    case ParamType::color: return ValueClass::color;
    case ParamType::enumeration: return ValueClass::ident;
    case ParamType::text: return ValueClass::text;
  }
  return std::nullopt;
}

void check_param_value(const ParamSpec& spec, const Value& v, const NodePath& path) {
  if (std::holds_alternative<FieldExpr>(v) && !spec.field_allowed) mismatch(path, "parameter takes a literal only");
  if (value_class(v) != spec_class(spec)) mismatch(path, "value type does not match parameter type");
}

NodeFamily slot_family(Slot slot) {
  switch (slot) {
    case Slot::fragmenter: return NodeFamily::fragmenter;
    case Slot::merges: return NodeFamily::merge;
    case Slot::fragment_ops: return NodeFamily::fragop;
    default: return NodeFamily::style;
  }
}

}  // namespace

Subtree resolve_path(const Program& p, const NodePath& path) {
  if (path.slot == Slot::canvas) return canvas_value(p.canvas, *path.param);
  if (!path.layer || *path.layer >= p.layers.size()) not_found(path);
  const Layer& layer = p.layers[*path.layer];
  if (path.slot == Slot::none) {
    if (!path.param) return layer;
    if (*path.param == "opacity") return Value{layer.opacity};
    not_found(path);
  }
  const Node* node = locate_node(layer, path);
  if (!path.param) return *node;
  if (const Value* v = node->find(*path.param)) return *v;
  not_found(path);
}

Program substitute(const Program& p, const NodePath& path, const Subtree& subtree) {
  Program out = p;
  if (path.slot == Slot::canvas) {
    const std::string& name = *path.param;
    const Value* v = std::get_if<Value>(&subtree);
    if (!v) mismatch(path, "canvas parameters take literals");
    if (name == "width" || name == "height") {
      const Decimal* d = std::get_if<Decimal>(v);
      if (!d) mismatch(path, "canvas size takes a number");
      (name == "width" ? out.canvas.width : out.canvas.height) = d->round_half_up();
      if (!d->is_integer()) mismatch(path, "canvas size must be an integer");
    } else if (name == "background") {
      const Color* c = std::get_if<Color>(v);
      if (!c) mismatch(path, "background takes a color");
      out.canvas.background = *c;
    } else {
      not_found(path);
    }
    return out;
  }
  if (!path.layer || *path.layer >= out.layers.size()) not_found(path);
  Layer& layer = out.layers[*path.layer];
  if (path.slot == Slot::none) {
    if (!path.param) {
      const Layer* l = std::get_if<Layer>(&subtree);
      if (!l) mismatch(path, "a layer slot takes a layer");
      layer = *l;
      return out;
    }
    if (*path.param != "opacity") not_found(path);
    const Value* v = std::get_if<Value>(&subtree);
    const Decimal* d = v ? std::get_if<Decimal>(v) : nullptr;
    if (!d) mismatch(path, "opacity takes a number");
    layer.opacity = *d;
    return out;
  }
  Node* node = locate_node(layer, path);
  if (!path.param) {
    const Node* n = std::get_if<Node>(&subtree);
    if (!n) mismatch(path, "a node slot takes a node");
    if (family_of(n->kind) != slot_family(path.slot))
      mismatch(path, std::string(family_name(family_of(n->kind))) + " node in " +
                         std::string(family_name(slot_family(path.slot))) + " slot");
    *node = *n;
    return out;
  }
  Value* target = node->find(*path.param);
  if (!target) not_found(path);
  const Value* v = std::get_if<Value>(&subtree);
  if (!v) mismatch(path, "a parameter slot takes a value");
  check_param_value(*find_param_spec(node->kind, *path.param), *v, path);
  *target = *v;
  return out;
}

}  // namespace splitweave
