#include "splitweave/edits.hpp"

#include <algorithm>

#include "splitweave/parser.hpp"

namespace splitweave {

std::string_view edit_kind_name(EditKind kind) {
  static constexpr std::string_view names[] = {"insert", "remove", "replace"};
  return names[static_cast<int>(kind)];
}

std::string NodeSelector::str() const {
  return target + "#" + std::to_string(ordinal) + (param ? "." + *param : "");
}

namespace {

bool known_target(std::string_view target) {
  return target == "layer" || target == "fragmenter" || target == "fragop" || target == "style" ||
         parse_kind(target).has_value();
}

bool matches(const Node& n, std::string_view target) {
  return kind_name(n.kind) == target || family_name(family_of(n.kind)) == target;
}

// ---------------------------------------------------------------------------
// Serialization.

std::string print_payload(const Subtree& s) {
  if (const Node* n = std::get_if<Node>(&s)) return print_node(*n);
  if (const Value* v = std::get_if<Value>(&s)) return print_value(*v);
  const Layer& layer = std::get<Layer>(s);
  std::string out = "(layer " + print_node(layer.fragmenter);
  for (const auto* list : {&layer.merges, &layer.fragment_ops, &layer.styles})
    for (const Node& n : *list) out += " " + print_node(n);
  return out + " :opacity " + layer.opacity.str() + ")";
}

}  // namespace

std::string print_edit(const EditDescriptor& e) {
  std::string out = "(edit :kind " + std::string(edit_kind_name(e.kind)) + " :target " + e.selector.target +
                    " :ordinal " + std::to_string(e.selector.ordinal);
  if (e.selector.param) out += " :param " + *e.selector.param;
  if (e.payload) out += " :payload " + print_payload(*e.payload);
  return out + ")";
}

EditDescriptor parse_edit(std::string_view text) {
  using syntax::Sx;
  Sx form = syntax::read(text);
  if (form.head() != "edit") syntax::fail(form, "expected an edit form", {"(edit"});
  auto args = syntax::keyword_args(form, 1, {"kind", "target", "ordinal", "param", "payload"});
  auto ident = [&](const char* key) -> const Sx& {
    const Sx* v = args.find(key);
    if (!v) syntax::fail(form, std::string("edit is missing :") + key, {std::string(":") + key});
    if (v->kind != Sx::Kind::ident) syntax::fail(*v, std::string(":") + key + " takes an identifier", {"identifier"});
    return *v;
  };

  EditDescriptor e;
  const Sx& kind = ident("kind");
  if (kind.text == "insert") {
    e.kind = EditKind::insert;
  } else if (kind.text == "remove") {
    e.kind = EditKind::remove;
  } else if (kind.text == "replace") {
    e.kind = EditKind::replace;
  } else {
    syntax::fail(kind, "unknown edit kind '" + kind.text + "'", {"insert", "remove", "replace"});
  }
  const Sx& target = ident("target");
  if (!known_target(target.text)) syntax::fail(target, "unknown selector target '" + target.text + "'");
  e.selector.target = target.text;

  const Sx* ordinal = args.find("ordinal");
  if (ordinal) {
    auto d = Decimal::parse(ordinal->text);
    if (ordinal->kind != Sx::Kind::number || !d || !d->is_integer() || d->micros() < 0)
      syntax::fail(*ordinal, ":ordinal takes a non-negative integer", {"integer"});
    e.selector.ordinal = static_cast<std::size_t>(d->round_half_up());
  }
  if (args.find("param")) e.selector.param = ident("param").text;

  if (const Sx* payload = args.find("payload")) {
    std::string_view head = payload->head();
    if (head == "layer") {
      e.payload = syntax::build_layer(*payload);
    } else if (payload->is_list() && parse_kind(head)) {
      e.payload = syntax::build_node(*payload);
    } else {
      Value v = syntax::build_value(*payload);
      // Text slots keep "#RRGGBB" strings as text.
      if (e.selector.param && payload->kind == Sx::Kind::string && std::holds_alternative<Color>(v)) {
        if (auto kind = parse_kind(e.selector.target)) {
          const ParamSpec* spec = find_param_spec(*kind, *e.selector.param);
          if (spec && spec->type == ParamType::text) v = Text{payload->text};
        }
      }
      e.payload = std::move(v);
    }
  }
  if ((e.kind == EditKind::remove) == e.payload.has_value())
    syntax::fail(form, e.kind == EditKind::remove ? "remove edits take no payload" : "edit is missing :payload",
                 e.kind == EditKind::remove ? std::vector<std::string>{} : std::vector<std::string>{":payload"});
  return e;
}

// ---------------------------------------------------------------------------
// Selection and application.

std::optional<NodePath> select(const Program& p, const NodeSelector& s) {
  std::size_t seen = 0;
  std::optional<NodePath> hit;
  auto visit = [&](const NodePath& path) {
    if (!hit && seen++ == s.ordinal) hit = path;
  };
  for (std::size_t li = 0; li < p.layers.size() && !hit; ++li) {
    const Layer& layer = p.layers[li];
    if (s.target == "layer") {
      visit(layer_path(li));
      continue;
    }
    if (matches(layer.fragmenter, s.target)) visit(node_path(li, Slot::fragmenter));
    for (std::size_t j = 0; j < layer.merges.size(); ++j)
      if (matches(layer.merges[j], s.target)) visit(node_path(li, Slot::merges, j));
    for (std::size_t j = 0; j < layer.fragment_ops.size(); ++j)
      if (matches(layer.fragment_ops[j], s.target)) visit(node_path(li, Slot::fragment_ops, j));
    for (std::size_t j = 0; j < layer.styles.size(); ++j)
      if (matches(layer.styles[j], s.target)) visit(node_path(li, Slot::style, j));
  }
  if (!hit || !s.param) return hit;
  NodePath path = param_path(*hit, *s.param);
  try {
    resolve_path(p, path);
  } catch (const Error&) {
    return std::nullopt;
  }
  return path;
}

namespace {

Node node_at(const Program& p, const NodePath& path) {
  NodePath bare = path;
  bare.param.reset();
  return std::get<Node>(resolve_path(p, bare));
}

bool value_fits(const ParamSpec& spec, const Value& v) {
  if (std::holds_alternative<FieldExpr>(v)) return spec.field_allowed;
  switch (spec.type) {
    case ParamType::integer:
    case ParamType::real: return std::holds_alternative<Decimal>(v);
    case ParamType::color: return std::holds_alternative<Color>(v);
    case ParamType::enumeration: return std::holds_alternative<Ident>(v);
    case ParamType::text: return std::holds_alternative<Text>(v);
  }
  return false;
}

std::vector<Node>& slot_list(Layer& layer, NodeFamily family) {
  switch (family) {
    case NodeFamily::merge: return layer.merges;
    case NodeFamily::fragop: return layer.fragment_ops;
    default: return layer.styles;
  }
}

std::size_t slot_limit(NodeFamily family) {
  switch (family) {
    case NodeFamily::merge: return kMaxMerges;
    case NodeFamily::fragop: return kMaxFragmentOps;
    default: return kMaxStyles;
  }
}

// Reason the edit cannot apply, or nothing when it is compatible.
std::optional<std::string> incompatibility(const Program& p, const EditDescriptor& e) {
  const NodeSelector& s = e.selector;
  if ((e.kind == EditKind::remove) == e.payload.has_value()) return "malformed payload";
  auto path = select(p, s);
  if (!path) return "selector " + s.str() + " matches nothing";

  switch (e.kind) {
    case EditKind::insert: {
      if (s.target != "layer" || s.param) return "insert selects a layer";
      if (std::holds_alternative<Layer>(*e.payload)) {
        if (p.layers.size() >= kMaxLayers) return "program already has the maximum number of layers";
        return std::nullopt;
      }
      const Node* n = std::get_if<Node>(&*e.payload);
      if (!n) return "insert payload must be a node or layer";
      NodeFamily fam = family_of(n->kind);
      if (fam == NodeFamily::fragmenter) return "a layer holds exactly one fragmenter";
      Layer copy = p.layers[*path->layer];
      if (slot_list(copy, fam).size() >= slot_limit(fam)) return "slot is full";
      return std::nullopt;
    }
    case EditKind::remove: {
      if (s.param) return "remove selects a node or layer";
      if (path->slot == Slot::none) {
        if (p.layers.size() <= 1) return "a program keeps at least one layer";
        return std::nullopt;
      }
      if (path->slot == Slot::fragmenter) return "the fragmenter cannot be removed";
      if (path->slot == Slot::style && p.layers[*path->layer].styles.size() <= kMinStyles)
        return "a layer keeps at least one style";
      return std::nullopt;
    }
    case EditKind::replace: {
      const Subtree& payload = *e.payload;
      if (s.param) {
        const Value* v = std::get_if<Value>(&payload);
        if (!v) return "parameter replacement takes a value";
        if (path->slot == Slot::none) {
          if (!std::holds_alternative<Decimal>(*v)) return "opacity takes a number";
          return std::nullopt;
        }
        const Node& n = node_at(p, *path);
        const ParamSpec* spec = find_param_spec(n.kind, *s.param);
        if (!spec || !value_fits(*spec, *v)) return "value does not fit parameter " + *s.param;
        return std::nullopt;
      }
      if (path->slot == Slot::none) {
        if (!std::holds_alternative<Layer>(payload)) return "a layer is replaced by a layer";
        return std::nullopt;
      }
      const Node* n = std::get_if<Node>(&payload);
      if (!n) return "a node is replaced by a node";
      if (family_of(n->kind) != family_of(node_at(p, *path).kind)) return "payload belongs to another slot family";
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_compatible(const Program& p, const EditDescriptor& e) { return !incompatibility(p, e); }

Program apply_edit(const Program& p, const EditDescriptor& e) {
  if (auto why = incompatibility(p, e))
    throw Error(ErrorCode::incompatible_edit, "edit " + std::string(edit_kind_name(e.kind)) + " " +
                                                  e.selector.str() + " is incompatible: " + *why);
  NodePath path = *select(p, e.selector);
  Program out;
  switch (e.kind) {
    case EditKind::insert: {
      out = p;
      if (const Layer* l = std::get_if<Layer>(&*e.payload)) {
        out.layers.push_back(*l);
      } else {
        const Node& n = std::get<Node>(*e.payload);
        slot_list(out.layers[*path.layer], family_of(n.kind)).push_back(n);
      }
      break;
    }
    case EditKind::remove: {
      out = p;
      if (path.slot == Slot::none) {
        out.layers.erase(out.layers.begin() + static_cast<std::ptrdiff_t>(*path.layer));
      } else {
        Layer& layer = out.layers[*path.layer];
        auto& list = path.slot == Slot::merges ? layer.merges
                     : path.slot == Slot::fragment_ops ? layer.fragment_ops
                                                       : layer.styles;
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(path.index));
      }
      break;
    }
    case EditKind::replace: out = substitute(p, path, *e.payload); break;
  }
  auto diags = validate(out);
  if (!diags.empty())
    throw Error(ErrorCode::invalid_result, "edited program is invalid: " + diags.front().message, diags.front().path);
  return out;
}

// ---------------------------------------------------------------------------
// Edit sampling.

namespace {

NodeSelector selector(std::string target, std::size_t ordinal, std::optional<std::string> param = std::nullopt) {
  return {std::move(target), ordinal, std::move(param)};
}

FieldExpr merge_key(Stream& rng) {
  std::vector<Scalar> values;
  for (std::int64_t k = 0, n = rng.range(2, 3); k < n; ++k) values.emplace_back(Decimal::from_int(k));
  return AltField{Axis::id, values};
}

EditDescriptor sample_sfp_edit(Stream& rng, const Palette& palette, const SamplerConfig& cfg) {
  switch (rng.weighted(cfg.sfp.edit_weights)) {
    case 0: return {EditKind::replace, selector("fragmenter", 0), sample_sfp_fragmenter(rng, cfg)};
    case 1: {
      // Keyed by id so the payload fits every fragmenter.
      FieldExpr color;
      if (rng.chance(0.3)) {
        color = ConstField{palette.colors[rng.below(palette.colors.size())]};
      } else {
        std::vector<Scalar> values;
        std::vector<Color> pool = palette.colors;
        for (std::size_t n = std::min<std::size_t>(2 + rng.below(2), pool.size()); n > 0; --n) {
          std::size_t k = rng.below(pool.size());
          values.emplace_back(pool[k]);
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        }
        color = CycleField{Axis::id, values};
      }
      return {EditKind::replace, selector("fill", 0, "color"), Value{color}};
    }
    case 2: return {EditKind::insert, selector("layer", 0), sample_outline(rng, palette, cfg)};
    case 3: return {EditKind::remove, selector("outline", 0), std::nullopt};
    default: return {EditKind::replace, selector("merge", 0, "key"), Value{merge_key(rng)}};
  }
}

EditDescriptor sample_mtp_edit(Stream& rng, const Palette& palette, const MotifRegistry& motifs,
                               const SamplerConfig& cfg) {
  std::vector<std::string> ids;
  for (const MotifDef& m : motifs.all()) ids.push_back(m.id);
  const AxisAvailability grid_axes{true, true};
  const auto& m = cfg.mtp;
  auto shape = [&] { return sample_field_shape(rng, m.field_weights, grid_axes); };
  switch (rng.weighted(m.edit_weights)) {
    case 0: return {EditKind::replace, selector("place-motif", 0, "motif"), Value{Text{ids[rng.below(ids.size())]}}};
    case 1:
      return {EditKind::replace, selector("place-motif", 0, "scale"),
              Value{sample_numeric_field(rng, shape(), grid_axes, m.scale, 0.05)}};
    case 2: {
      RealRange rotate{m.rotate.min, std::max(m.rotate.min, m.rotate.max - 15)};
      return {EditKind::replace, selector("place-motif", 0, "rotate"),
              Value{sample_numeric_field(rng, shape(), grid_axes, rotate, 15)}};
    }
    case 3:
      return {EditKind::replace, selector("place-motif", 0, "color"),
              Value{sample_color_field(rng, shape(), grid_axes, palette.colors)}};
    case 4: return {EditKind::insert, selector("layer", 0), sample_outline(rng, palette, cfg)};
    case 5: return {EditKind::remove, selector("outline", 0), std::nullopt};
    case 6:
      return {EditKind::insert, selector("layer", 0),
              sample_place_motif(rng, ids[rng.below(ids.size())], grid_axes, palette.colors, cfg)};
    case 7: return {EditKind::remove, selector("place-motif", 1), std::nullopt};
    default: {
      Layer layer;
      layer.fragmenter = sample_mtp_fragmenter(rng, cfg);
      layer.styles.push_back(sample_place_motif(rng, ids[rng.below(ids.size())], fragmenter_axes(layer.fragmenter),
                                                palette.colors, cfg));
      return {EditKind::insert, selector("layer", 0), layer};
    }
  }
}

}  // namespace

EditDescriptor sample_edit(Seed seed, StyleTag style, const MotifRegistry& motifs, const SamplerConfig& cfg) {
  Stream rng(derive_seed(seed, "edit"));
  Palette palette = sample_palette(derive_seed(seed, "edit-palette"), cfg);
  switch (style) {
    case StyleTag::mtp: return sample_mtp_edit(rng, palette, motifs, cfg);
    case StyleTag::sfp: return sample_sfp_edit(rng, palette, cfg);
    default: throw Error(ErrorCode::range, "no edit table for style '" + std::string(style_tag_name(style)) + "'");
  }
}

}  // namespace splitweave
