#include <algorithm>

#include "splitweave/parser.hpp"

namespace splitweave {
namespace syntax {

std::string_view Sx::head() const {
  if (kind != Kind::list || items.empty() || items.front().kind != Kind::ident) return {};
  return items.front().text;
}

[[noreturn]] void fail(const Sx& at, const std::string& message, std::vector<std::string> expected) {
  throw ParseError(at.span, message, std::move(expected));
}

namespace {

[[noreturn]] void fail_at_close(const Sx& list, const std::string& message, std::vector<std::string> expected) {
  SourceSpan s{list.span.end_line, list.span.end_col, list.span.end_line, list.span.end_col};
  throw ParseError(s, message, std::move(expected));
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '/' || c == '.';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Sx read_document() {
    skip_space();
    if (at_end()) throw ParseError(here(), "empty input", {"("});
    Sx form = read_form();
    skip_space();
    if (!at_end()) throw ParseError(here(), "unexpected text after the top-level form", {"end of input"});
    return form;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  SourceSpan here() const {
    if (at_end() && pos_ > 0) return {last_line_, last_col_, last_line_, last_col_};
    return {line_, col_, line_, col_};
  }

  void advance() {
    last_line_ = line_;
    last_col_ = col_;
    auto c = static_cast<unsigned char>(text_[pos_++]);
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++col_;
    } else {
      // UTF-8 continuation byte: columns count code points.
      last_col_ = col_ - 1;
    }
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void close_span(Sx& sx) {
    sx.span.end_line = last_line_;
    sx.span.end_col = last_col_;
  }

  Sx read_form() {
    Sx sx;
    SourceSpan start = here();
    sx.span = start;
    char c = peek();
    if (c == '(') {
      sx.kind = Sx::Kind::list;
      advance();
      for (;;) {
        skip_space();
        if (at_end()) throw ParseError(here(), "unclosed '('", {")"});
        if (peek() == ')') {
          advance();
          break;
        }
        sx.items.push_back(read_form());
      }
    } else if (c == ')') {
      throw ParseError(start, "unexpected ')'", {"value"});
    } else if (c == '"') {
      sx.kind = Sx::Kind::string;
      advance();
      for (;;) {
        if (at_end()) throw ParseError(here(), "unterminated string", {"\""});
        char ch = peek();
        if (ch == '\n') throw ParseError(here(), "newline in string", {"\""});
        advance();
        if (ch == '"') break;
        if (ch == '\\') {
          if (at_end()) throw ParseError(here(), "unterminated escape", {"\\\"", "\\\\"});
          char esc = peek();
          if (esc != '"' && esc != '\\') throw ParseError(here(), "unknown escape", {"\\\"", "\\\\"});
          advance();
          sx.text += esc;
        } else {
          sx.text += ch;
        }
      }
    } else if (c == ':') {
      sx.kind = Sx::Kind::keyword;
      advance();
      if (at_end() || !ident_start(peek())) throw ParseError(here(), "expected keyword name", {"identifier"});
      while (!at_end() && ident_char(peek())) {
        sx.text += peek();
        advance();
      }
    } else if (digit(c) || c == '-' || c == '+' || c == '.') {
      sx.kind = Sx::Kind::number;
      while (!at_end() && (digit(peek()) || peek() == '-' || peek() == '+' || peek() == '.')) {
        sx.text += peek();
        advance();
      }
      close_span(sx);
      if (!Decimal::parse(sx.text)) throw ParseError(sx.span, "malformed number '" + sx.text + "'", {"number"});
    } else if (ident_start(c)) {
      sx.kind = Sx::Kind::ident;
      while (!at_end() && ident_char(peek())) {
        sx.text += peek();
        advance();
      }
    } else {
      throw ParseError(start, std::string("unexpected character '") + c + "'", {"(", "number", "string", "identifier"});
    }
    close_span(sx);
    return sx;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int last_line_ = 1, last_col_ = 1;
};

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

Scalar build_scalar(const Sx& form) {
  if (form.kind == Sx::Kind::number) return *Decimal::parse(form.text);
  if (form.kind == Sx::Kind::string) {
    if (auto c = Color::parse(form.text)) return *c;
  }
  fail(form, "expected a number or a \"#RRGGBB\" color", {"number", "color"});
}

std::vector<Scalar> build_scalar_list(const Sx& form) {
  if (!form.is_list() || !form.head().empty()) fail(form, "expected a parenthesized value list", {"("});
  std::vector<Scalar> out;
  for (const Sx& item : form.items) out.push_back(build_scalar(item));
  return out;
}

Axis build_axis(const Sx& form) {
  if (form.kind == Sx::Kind::ident)
    if (auto a = parse_axis(form.text)) return *a;
  fail(form, "expected an axis", {"row", "col", "id"});
}

const Sx& require(const KeywordArgs& args, const Sx& form, std::string_view name) {
  if (const Sx* v = args.find(name)) return *v;
  fail_at_close(form, std::string(form.head()) + " requires :" + std::string(name), {":" + std::string(name)});
}

// List-valued fields accept either :values or :colors.
const Sx& require_list(const KeywordArgs& args, const Sx& form) {
  const Sx* values = args.find("values");
  const Sx* colors = args.find("colors");
  if (values && colors) fail(*colors, "give either :values or :colors, not both");
  if (values) return *values;
  if (colors) return *colors;
  fail_at_close(form, std::string(form.head()) + " requires a value list", {":values", ":colors"});
}

FieldExpr build_field(const Sx& form) {
  const std::string_view head = form.head();
  if (head == "const") {
    auto args = keyword_args(form, 1, {"value"});
    return ConstField{build_scalar(require(args, form, "value"))};
  }
  if (head == "alt") {
    auto args = keyword_args(form, 1, {"axis", "values", "colors"});
    return AltField{build_axis(require(args, form, "axis")), build_scalar_list(require_list(args, form))};
  }
  if (head == "ramp") {
    auto args = keyword_args(form, 1, {"axis", "from", "to"});
    return RampField{build_axis(require(args, form, "axis")), build_scalar(require(args, form, "from")),
                     build_scalar(require(args, form, "to"))};
  }
  if (head == "checker") {
    auto args = keyword_args(form, 1, {"values", "colors"});
    return CheckerField{build_scalar_list(require_list(args, form))};
  }
  if (head == "radial") {
    auto args = keyword_args(form, 1, {"center", "from", "to"});
    RadialField f;
    if (const Sx* c = args.find("center")) {
      auto pts = build_scalar_list(*c);
      if (pts.size() != 2 || !std::holds_alternative<Decimal>(pts[0]) || !std::holds_alternative<Decimal>(pts[1]))
        fail(*c, "center takes two numbers", {"(x y)"});
      f.center_x = std::get<Decimal>(pts[0]);
      f.center_y = std::get<Decimal>(pts[1]);
    }
    f.from = build_scalar(require(args, form, "from"));
    f.to = build_scalar(require(args, form, "to"));
    return f;
  }
  if (head == "cycle") {
    auto args = keyword_args(form, 1, {"key", "values", "colors"});
    return CycleField{build_axis(require(args, form, "key")), build_scalar_list(require_list(args, form))};
  }
  if (head == "jitter") {
    auto args = keyword_args(form, 1, {"salt", "min", "max"});
    JitterField f;
    if (const Sx* s = args.find("salt")) {
      if (s->kind != Sx::Kind::number) fail(*s, "salt takes an integer", {"number"});
      f.salt = *Decimal::parse(s->text);
    }
    f.min = build_scalar(require(args, form, "min"));
    f.max = build_scalar(require(args, form, "max"));
    return f;
  }
  fail(form, "unknown field " + quoted(head), {"const", "alt", "ramp", "checker", "radial", "cycle", "jitter"});
}

std::vector<std::string_view> param_names(NodeKind kind) {
  std::vector<std::string_view> names;
  for (const ParamSpec& s : param_specs(kind)) names.push_back(s.name);
  return names;
}

void build_canvas(const Sx& form, CanvasSpec& canvas) {
  auto args = keyword_args(form, 1, {"width", "height", "background"});
  for (auto [key, value] : args.pairs) {
    if (key->text == "background") {
      auto c = value->kind == Sx::Kind::string ? Color::parse(value->text) : std::nullopt;
      if (!c) fail(*value, "background takes a \"#RRGGBB\" color", {"color"});
      canvas.background = *c;
      continue;
    }
    if (value->kind != Sx::Kind::number) fail(*value, ":" + key->text + " takes an integer", {"number"});
    Decimal d = *Decimal::parse(value->text);
    if (!d.is_integer()) fail(*value, ":" + key->text + " takes an integer", {"integer"});
    (key->text == "width" ? canvas.width : canvas.height) = d.round_half_up();
  }
}

}  // namespace

const Sx* KeywordArgs::find(std::string_view name) const {
  for (auto [k, v] : pairs)
    if (k->text == name) return v;
  return nullptr;
}

KeywordArgs keyword_args(const Sx& form, std::size_t first, const std::vector<std::string_view>& allowed) {
  KeywordArgs args;
  std::vector<std::string> expected;
  for (std::string_view a : allowed) expected.push_back(":" + std::string(a));
  for (std::size_t i = first; i < form.items.size(); ++i) {
    const Sx& key = form.items[i];
    if (key.kind != Sx::Kind::keyword) fail(key, "expected a keyword argument", expected);
    if (std::find(allowed.begin(), allowed.end(), key.text) == allowed.end())
      fail(key, "unknown keyword :" + key.text + " for " + std::string(form.head()), expected);
    if (args.find(key.text)) fail(key, "duplicate keyword :" + key.text);
    if (i + 1 >= form.items.size()) fail_at_close(form, "keyword :" + key.text + " has no value", {"value"});
    const Sx& value = form.items[++i];
    if (value.kind == Sx::Kind::keyword) fail(value, "keyword :" + key.text + " has no value", {"value"});
    args.pairs.emplace_back(&key, &value);
  }
  return args;
}

Value build_value(const Sx& form) {
  switch (form.kind) {
    case Sx::Kind::number: return *Decimal::parse(form.text);
    case Sx::Kind::string:
      if (auto c = Color::parse(form.text)) return *c;
      return Text{form.text};
    case Sx::Kind::ident: return Ident{form.text};
    case Sx::Kind::keyword: fail(form, "expected a value", {"number", "string", "identifier", "field"});
    case Sx::Kind::list: break;
  }
  if (form.head().empty()) fail(form, "expected a field form", {"const", "alt", "ramp", "checker", "radial", "cycle", "jitter"});
  return build_field(form);
}

Node build_node(const Sx& form) {
  auto kind = form.is_list() ? parse_kind(form.head()) : std::nullopt;
  if (!kind) fail(form, "expected a node", {"grid", "brick", "stripes", "voronoi", "merge", "inset", "scale", "rotate",
                                             "round", "fill", "outline", "place-motif"});
  auto args = keyword_args(form, 1, param_names(*kind));
  std::vector<Param> overrides;
  for (auto [key, value] : args.pairs) {
    Value v = build_value(*value);
    // A quoted "#RRGGBB" in a text slot stays text.
    const ParamSpec* spec = find_param_spec(*kind, key->text);
    if (spec->type == ParamType::text && std::holds_alternative<Color>(v) && value->kind == Sx::Kind::string)
      v = Text{value->text};
    overrides.push_back({key->text, std::move(v)});
  }
  return make_node(*kind, std::move(overrides));
}

Layer build_layer(const Sx& form) {
  if (form.head() != "layer") fail(form, "expected a layer", {"(layer"});
  Layer layer;
  layer.fragmenter = Node{};
  bool have_fragmenter = false;
  bool have_opacity = false;
  int stage = 0;  // 0 fragmenter, 1 merges, 2 fragment ops, 3 styles
  for (std::size_t i = 1; i < form.items.size(); ++i) {
    const Sx& item = form.items[i];
    if (item.kind == Sx::Kind::keyword) {
      if (item.text != "opacity") fail(item, "unknown keyword :" + item.text + " for layer", {":opacity"});
      if (have_opacity) fail(item, "duplicate keyword :opacity");
      if (i + 1 >= form.items.size() || form.items[i + 1].kind != Sx::Kind::number)
        fail(i + 1 < form.items.size() ? form.items[i + 1] : item, ":opacity takes a number", {"number"});
      layer.opacity = *Decimal::parse(form.items[++i].text);
      have_opacity = true;
      continue;
    }
    Node node = build_node(item);
    NodeFamily fam = family_of(node.kind);
    if (!have_fragmenter) {
      if (fam != NodeFamily::fragmenter) fail(item, "a layer starts with its fragmenter", {"grid", "brick", "stripes", "voronoi"});
      layer.fragmenter = std::move(node);
      have_fragmenter = true;
      stage = 1;
      continue;
    }
    int node_stage = fam == NodeFamily::merge ? 1 : fam == NodeFamily::fragop ? 2 : fam == NodeFamily::style ? 3 : 0;
    if (node_stage == 0) fail(item, "a layer holds exactly one fragmenter", {"merge", "fragment op", "style"});
    if (node_stage < stage)
      fail(item, "layer children must be ordered fragmenter, merges, fragment ops, styles");
    stage = node_stage;
    if (node_stage == 1) {
      if (layer.merges.size() == kMaxMerges) fail(item, "at most 2 merge nodes per layer");
      layer.merges.push_back(std::move(node));
    } else if (node_stage == 2) {
      if (layer.fragment_ops.size() == kMaxFragmentOps) fail(item, "at most 4 fragment operations per layer");
      layer.fragment_ops.push_back(std::move(node));
    } else {
      if (layer.styles.size() == kMaxStyles) fail(item, "at most 3 styles per layer");
      layer.styles.push_back(std::move(node));
    }
  }
  if (!have_fragmenter) fail_at_close(form, "layer has no fragmenter", {"grid", "brick", "stripes", "voronoi"});
  if (layer.styles.empty()) fail_at_close(form, "layer has no style", {"fill", "outline", "place-motif"});
  return layer;
}

Program build_program(const Sx& form) {
  if (form.head() != "pattern") fail(form, "expected a pattern form", {"(pattern"});
  Program p;
  std::size_t i = 1;
  bool have_version = false, have_tag = false;
  while (i < form.items.size() && form.items[i].kind == Sx::Kind::keyword) {
    const Sx& key = form.items[i];
    if (i + 1 >= form.items.size()) fail_at_close(form, "keyword :" + key.text + " has no value", {"value"});
    const Sx& value = form.items[i + 1];
    if (key.text == "version") {
      if (have_version) fail(key, "duplicate keyword :version");
      auto d = value.kind == Sx::Kind::number ? Decimal::parse(value.text) : std::nullopt;
      if (!d || !d->is_integer()) fail(value, ":version takes an integer", {"integer"});
      p.version = d->round_half_up();
      have_version = true;
    } else if (key.text == "tag") {
      if (have_tag) fail(key, "duplicate keyword :tag");
      auto tag = value.kind == Sx::Kind::ident ? parse_style_tag(value.text) : std::nullopt;
      if (!tag) fail(value, "unknown style tag", {"mtp", "sfp", "custom"});
      p.style_tag = *tag;
      have_tag = true;
    } else {
      fail(key, "unknown keyword :" + key.text + " for pattern", {":version", ":tag"});
    }
    i += 2;
  }
  if (i >= form.items.size()) fail_at_close(form, "pattern has no canvas", {"(canvas"});
  const Sx& canvas = form.items[i];
  if (canvas.head() != "canvas") fail(canvas, "expected the canvas form", {"(canvas"});
  build_canvas(canvas, p.canvas);
  ++i;
  if (i >= form.items.size()) fail_at_close(form, "pattern has no layer", {"(layer"});
  for (; i < form.items.size(); ++i) {
    if (p.layers.size() == kMaxLayers) fail(form.items[i], "at most 8 layers are allowed");
    p.layers.push_back(build_layer(form.items[i]));
  }
  return p;
}

Sx read(std::string_view text) { return Reader(text).read_document(); }

}  // namespace syntax

Program parse_unchecked(std::string_view text) { return syntax::build_program(syntax::read(text)); }

Program parse(std::string_view text) {
  Program p = parse_unchecked(text);
  auto diagnostics = validate(p);
  if (!diagnostics.empty()) throw SemanticError(std::move(diagnostics));
  return p;
}

// ---------------------------------------------------------------------------
// Printing.

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string print_scalar(const Scalar& s) {
  if (const Decimal* d = std::get_if<Decimal>(&s)) return d->str();
  return quote(std::get<Color>(s).hex());
}

std::string print_list(const std::vector<Scalar>& values) {
  std::string out = values.empty() || std::holds_alternative<Decimal>(values.front()) ? ":values (" : ":colors (";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += print_scalar(values[i]);
  }
  return out + ")";
}

std::string print_field(const FieldExpr& field) {
  std::string body = std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstField>) {
          return ":value " + print_scalar(f.value);
        } else if constexpr (std::is_same_v<T, AltField>) {
          return ":axis " + std::string(axis_name(f.axis)) + " " + print_list(f.values);
        } else if constexpr (std::is_same_v<T, RampField>) {
          return ":axis " + std::string(axis_name(f.axis)) + " :from " + print_scalar(f.from) + " :to " +
                 print_scalar(f.to);
        } else if constexpr (std::is_same_v<T, CheckerField>) {
          return print_list(f.values);
        } else if constexpr (std::is_same_v<T, RadialField>) {
          return ":center (" + f.center_x.str() + " " + f.center_y.str() + ") :from " + print_scalar(f.from) +
                 " :to " + print_scalar(f.to);
        } else if constexpr (std::is_same_v<T, CycleField>) {
          return ":key " + std::string(axis_name(f.key)) + " " + print_list(f.values);
        } else {
          return ":salt " + f.salt.str() + " :min " + print_scalar(f.min) + " :max " + print_scalar(f.max);
        }
      },
      field);
  return "(" + std::string(field_kind_name(field)) + " " + body + ")";
}

}  // namespace

std::string print_value(const Value& v) {
  struct Visitor {
    std::string operator()(const Decimal& d) const { return d.str(); }
    std::string operator()(const Color& c) const { return quote(c.hex()); }
    std::string operator()(const Ident& i) const { return i.name; }
    std::string operator()(const Text& t) const { return quote(t.value); }
    std::string operator()(const FieldExpr& f) const { return print_field(f); }
  };
  return std::visit(Visitor{}, v);
}

std::string print_node(const Node& n) {
  std::string out = "(" + std::string(kind_name(n.kind));
  for (const ParamSpec& spec : param_specs(n.kind)) {
    const Value* v = n.find(spec.name);
    if (!v) continue;
    out += " :" + std::string(spec.name) + " " + print_value(*v);
  }
  return out + ")";
}

std::string print_layer(const Layer& layer, std::string_view indent) {
  const std::string inner = std::string(indent) + "  ";
  std::string out = "(layer\n";
  auto line = [&](const Node& n) { out += inner + print_node(n) + "\n"; };
  line(layer.fragmenter);
  for (const Node& n : layer.merges) line(n);
  for (const Node& n : layer.fragment_ops) line(n);
  for (const Node& n : layer.styles) line(n);
  out += inner + ":opacity " + layer.opacity.str() + ")";
  return out;
}

std::string print(const Program& p) {
  std::string out = "(pattern :version " + std::to_string(p.version) + " :tag " +
                    std::string(style_tag_name(p.style_tag)) + "\n";
  out += "  (canvas :width " + std::to_string(p.canvas.width) + " :height " + std::to_string(p.canvas.height) +
         " :background " + quote(p.canvas.background.hex()) + ")";
  for (const Layer& layer : p.layers) out += "\n  " + print_layer(layer, "  ");
  return out + ")\n";
}

}  // namespace splitweave
