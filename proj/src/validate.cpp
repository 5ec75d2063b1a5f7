#include <cmath>

#include "splitweave/fields.hpp"

namespace splitweave {

AxisAvailability fragmenter_axes(const Node& fragmenter) {
  switch (fragmenter.kind) {
    case NodeKind::grid:
    case NodeKind::brick:
    case NodeKind::stripes: return {true, true};
    default: return {false, false};
  }
}

AxisAvailability post_merge_axes(const Layer& layer) {
  if (!layer.merges.empty()) return {false, false};
  return fragmenter_axes(layer.fragmenter);
}

namespace {

class Validator {
 public:
  std::vector<Diagnostic> run(const Program& p) {
    if (p.version < 1) report("/", "version must be at least 1");
    check_canvas(p.canvas);
    if (p.layers.empty()) report("/", "a program needs at least one layer");
    if (p.layers.size() > kMaxLayers) report("/", "at most " + std::to_string(kMaxLayers) + " layers are allowed");
    for (std::size_t i = 0; i < p.layers.size(); ++i) check_layer(p.layers[i], i);
    return std::move(out_);
  }

 private:
  void report(std::string path, std::string message) { out_.push_back({std::move(path), std::move(message)}); }

  void check_canvas(const CanvasSpec& c) {
    if (c.width < 16 || c.width > 4096) report("/canvas/param[width]", "width must be within 16..4096");
    if (c.height < 16 || c.height > 4096) report("/canvas/param[height]", "height must be within 16..4096");
  }

  void check_layer(const Layer& layer, std::size_t li) {
    const std::string base = layer_path(li).str();
    if (layer.opacity < Decimal::from_int(0) || layer.opacity > Decimal::from_int(1))
      report(base + "/param[opacity]", "opacity must be within [0, 1]");

    if (family_of(layer.fragmenter.kind) != NodeFamily::fragmenter)
      report(node_path(li, Slot::fragmenter).str(), "fragmenter slot holds a non-fragmenter node");
    check_node(layer.fragmenter, node_path(li, Slot::fragmenter), {});

    if (layer.merges.size() > kMaxMerges) report(base, "at most 2 merge nodes per layer");
    if (layer.fragment_ops.size() > kMaxFragmentOps) report(base, "at most 4 fragment operations per layer");
    if (layer.styles.size() < kMinStyles) report(base, "a layer needs at least one style");
    if (layer.styles.size() > kMaxStyles) report(base, "at most 3 styles per layer");

    check_list(layer.merges, li, Slot::merges, NodeFamily::merge, fragmenter_axes(layer.fragmenter));
    AxisAvailability after = post_merge_axes(layer);
    check_list(layer.fragment_ops, li, Slot::fragment_ops, NodeFamily::fragop, after);
    check_list(layer.styles, li, Slot::style, NodeFamily::style, after);
  }

  void check_list(const std::vector<Node>& nodes, std::size_t li, Slot slot, NodeFamily family, AxisAvailability axes) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      NodePath path = node_path(li, slot, j);
      if (family_of(nodes[j].kind) != family) {
        report(path.str(), std::string(kind_name(nodes[j].kind)) + " is not a " + std::string(family_name(family)) +
                               " node");
        continue;
      }
      check_node(nodes[j], path, axes);
    }
  }

  void check_node(const Node& node, const NodePath& path, AxisAvailability axes) {
    auto specs = param_specs(node.kind);
    bool layout_ok = node.params.size() == specs.size();
    for (std::size_t k = 0; layout_ok && k < specs.size(); ++k) layout_ok = node.params[k].name == specs[k].name;
    if (!layout_ok) {
      report(path.str(), "parameter list does not match the " + std::string(kind_name(node.kind)) + " signature");
    }
    for (const Param& param : node.params) {
      const ParamSpec* spec = find_param_spec(node.kind, param.name);
      std::string at = param_path(path, param.name).str();
      if (!spec) {
        report(at, "unknown parameter");
        continue;
      }
      check_value(*spec, param.value, at, axes, node.kind == NodeKind::merge);
    }
  }

  void check_value(const ParamSpec& spec, const Value& value, const std::string& at, AxisAvailability axes,
                   bool merge_key) {
    if (const FieldExpr* field = std::get_if<FieldExpr>(&value)) {
      if (!spec.field_allowed) {
        report(at, "parameter takes a literal, not a field");
        return;
      }
      check_field(spec, *field, at, axes, merge_key);
      return;
    }
    switch (spec.type) {
      case ParamType::integer:
      case ParamType::real: {
        const Decimal* d = std::get_if<Decimal>(&value);
        if (!d) {
          report(at, "expected a number");
          return;
        }
        if (spec.type == ParamType::integer && !d->is_integer()) report(at, "expected an integer");
        check_number(spec, d->to_double(), d->to_double(), at);
        return;
      }
      case ParamType::color:
        if (!std::holds_alternative<Color>(value)) report(at, "expected a color");
        return;
      case ParamType::enumeration: {
        const Ident* id = std::get_if<Ident>(&value);
        if (!id) {
          report(at, "expected one of the identifiers for this parameter");
          return;
        }
        if (std::find(spec.choices.begin(), spec.choices.end(), id->name) == spec.choices.end())
          report(at, "unknown value '" + id->name + "'");
        return;
      }
      case ParamType::text: {
        const Text* t = std::get_if<Text>(&value);
        if (!t || t->value.empty()) report(at, "expected a non-empty string");
        return;
      }
    }
  }

  void check_number(const ParamSpec& spec, double lo, double hi, const std::string& at) {
    bool below = lo < spec.min;
    bool above = spec.max_exclusive ? hi >= spec.max : hi > spec.max;
    if (below || above) {
      std::string bounds = "[" + Decimal::from_double(spec.min).str() + ", " + Decimal::from_double(spec.max).str() +
                           (spec.max_exclusive ? ")" : "]");
      report(at, "value out of range " + bounds);
    }
  }

  void require_axis(Axis axis, AxisAvailability axes, const std::string& at) {
    if ((axis == Axis::row && !axes.row) || (axis == Axis::col && !axes.col))
      report(at, "fragments here carry no " + std::string(axis_name(axis)) + " index");
  }

  void check_field(const ParamSpec& spec, const FieldExpr& field, const std::string& at, AxisAvailability axes,
                   bool merge_key) {
    bool structure_ok = std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, AltField>) {
            require_axis(f.axis, axes, at);
            if (f.values.empty()) return report(at, "alt needs at least one value"), false;
          } else if constexpr (std::is_same_v<T, CycleField>) {
            require_axis(f.key, axes, at);
            if (f.values.empty()) return report(at, "cycle needs at least one value"), false;
          } else if constexpr (std::is_same_v<T, RampField>) {
            require_axis(f.axis, axes, at);
          } else if constexpr (std::is_same_v<T, CheckerField>) {
            require_axis(Axis::row, axes, at);
            require_axis(Axis::col, axes, at);
            if (f.values.size() != 2) return report(at, "checker takes exactly two values"), false;
          } else if constexpr (std::is_same_v<T, JitterField>) {
            if (!f.salt.is_integer() || f.salt < Decimal::from_int(0))
              report(at, "jitter salt must be a non-negative integer");
          }
          return true;
        },
        field);
    if (!structure_ok) return;

    auto cls = value_class(Value{field});
    if (!cls) {
      report(at, "field mixes numbers and colors");
      return;
    }
    bool numeric_slot = spec.type == ParamType::integer || spec.type == ParamType::real;
    if (numeric_slot && *cls != ValueClass::numeric) {
      report(at, "color field feeds a numeric slot");
      return;
    }
    if (spec.type == ParamType::color && *cls != ValueClass::color) {
      report(at, "numeric field feeds a color slot");
      return;
    }
    if (!numeric_slot) return;

    if (merge_key || spec.type == ParamType::integer) {
      bool discrete = std::holds_alternative<ConstField>(field) || std::holds_alternative<AltField>(field) ||
                      std::holds_alternative<CheckerField>(field) || std::holds_alternative<CycleField>(field);
      if (!discrete) {
        report(at, "integer slots accept const, alt, checker or cycle fields only");
        return;
      }
      bool integral = true;
      std::visit(
          [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstField>) {
              integral = std::get<Decimal>(f.value).is_integer();
            } else if constexpr (std::is_same_v<T, AltField> || std::is_same_v<T, CheckerField> ||
                                 std::is_same_v<T, CycleField>) {
              for (const Scalar& s : f.values) integral = integral && std::get<Decimal>(s).is_integer();
            }
          },
          field);
      if (!integral) report(at, "integer slot field values must be integers");
    }
    auto range = std::get<NumericRange>(field_range(field));
    check_number(spec, range.min, range.max, at);
  }

  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p) { return Validator{}.run(p); }

}  // namespace splitweave
