#include <cmath>

#include "splitweave/render.hpp"

namespace splitweave {

namespace {

class Interpolator {
 public:
  explicit Interpolator(double t) : t_(t) {}

  Program program(const Program& p, const Program& q) const {
    if (p.version != q.version) mismatch("/", "versions differ");
    if (p.layers.size() != q.layers.size()) mismatch("/", "layer counts differ");
    Program out = p;
    out.style_tag = t_ < 0.5 ? p.style_tag : q.style_tag;
    out.canvas.width = integer(p.canvas.width, q.canvas.width);
    out.canvas.height = integer(p.canvas.height, q.canvas.height);
    out.canvas.background = lerp(p.canvas.background, q.canvas.background, t_);
    for (std::size_t i = 0; i < p.layers.size(); ++i) out.layers[i] = layer(p.layers[i], q.layers[i], i);
    return out;
  }

 private:
  [[noreturn]] static void mismatch(const std::string& path, const std::string& why) {
    throw Error(ErrorCode::structure_mismatch, "programs are not structurally identical: " + why, path);
  }

  Decimal decimal(Decimal a, Decimal b, bool integral) const {
    auto micros = a.micros() + std::llround(static_cast<double>(b.micros() - a.micros()) * t_);
    Decimal d = Decimal::from_micros(micros);
    return integral ? Decimal::from_int(d.round_half_up()) : d;
  }

  std::int64_t integer(std::int64_t a, std::int64_t b) const {
    return decimal(Decimal::from_int(a), Decimal::from_int(b), true).round_half_up();
  }

  Layer layer(const Layer& a, const Layer& b, std::size_t li) const {
    const std::string path = layer_path(li).str();
    if (a.merges.size() != b.merges.size() || a.fragment_ops.size() != b.fragment_ops.size() ||
        a.styles.size() != b.styles.size())
      mismatch(path, "slot arities differ");
    Layer out;
    out.fragmenter = node(a.fragmenter, b.fragmenter, node_path(li, Slot::fragmenter).str());
    for (std::size_t j = 0; j < a.merges.size(); ++j)
      out.merges.push_back(node(a.merges[j], b.merges[j], node_path(li, Slot::merges, j).str()));
    for (std::size_t j = 0; j < a.fragment_ops.size(); ++j)
      out.fragment_ops.push_back(node(a.fragment_ops[j], b.fragment_ops[j], node_path(li, Slot::fragment_ops, j).str()));
    for (std::size_t j = 0; j < a.styles.size(); ++j)
      out.styles.push_back(node(a.styles[j], b.styles[j], node_path(li, Slot::style, j).str()));
    out.opacity = decimal(a.opacity, b.opacity, false);
    return out;
  }

  Node node(const Node& a, const Node& b, const std::string& path) const {
    if (a.kind != b.kind || a.params.size() != b.params.size()) mismatch(path, "node kinds differ");
    Node out = a;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
      const ParamSpec* spec = find_param_spec(a.kind, a.params[i].name);
      bool integral = spec && spec->type == ParamType::integer;
      out.params[i].value = value(a.params[i].value, b.params[i].value, integral, path + "/param[" + a.params[i].name + "]");
    }
    return out;
  }

  Value value(const Value& a, const Value& b, bool integral, const std::string& path) const {
    if (a.index() != b.index()) mismatch(path, "value kinds differ");
    if (const auto* d = std::get_if<Decimal>(&a)) return decimal(*d, std::get<Decimal>(b), integral);
    if (const auto* c = std::get_if<Color>(&a)) return lerp(*c, std::get<Color>(b), t_);
    if (const auto* f = std::get_if<FieldExpr>(&a)) return field(*f, std::get<FieldExpr>(b), integral, path);
    if (a != b) mismatch(path, "non-numeric values differ");
    return a;
  }

  Scalar scalar(const Scalar& a, const Scalar& b, bool integral, const std::string& path) const {
    if (a.index() != b.index()) mismatch(path, "field value kinds differ");
    if (const auto* d = std::get_if<Decimal>(&a)) return decimal(*d, std::get<Decimal>(b), integral);
    return lerp(std::get<Color>(a), std::get<Color>(b), t_);
  }

  std::vector<Scalar> scalars(const std::vector<Scalar>& a, const std::vector<Scalar>& b, bool integral,
                              const std::string& path) const {
    if (a.size() != b.size()) mismatch(path, "field value lists differ in length");
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(scalar(a[i], b[i], integral, path));
    return out;
  }

  FieldExpr field(const FieldExpr& a, const FieldExpr& b, bool integral, const std::string& path) const {
    if (a.index() != b.index()) mismatch(path, "field kinds differ");
    return std::visit(
        [&](const auto& fa) -> FieldExpr {
          using F = std::decay_t<decltype(fa)>;
          const F& fb = std::get<F>(b);
          if constexpr (std::is_same_v<F, ConstField>) {
            return ConstField{scalar(fa.value, fb.value, integral, path)};
          } else if constexpr (std::is_same_v<F, AltField>) {
            if (fa.axis != fb.axis) mismatch(path, "field axes differ");
            return AltField{fa.axis, scalars(fa.values, fb.values, integral, path)};
          } else if constexpr (std::is_same_v<F, RampField>) {
            if (fa.axis != fb.axis) mismatch(path, "field axes differ");
            return RampField{fa.axis, scalar(fa.from, fb.from, integral, path), scalar(fa.to, fb.to, integral, path)};
          } else if constexpr (std::is_same_v<F, CheckerField>) {
            return CheckerField{scalars(fa.values, fb.values, integral, path)};
          } else if constexpr (std::is_same_v<F, RadialField>) {
            return RadialField{decimal(fa.center_x, fb.center_x, false), decimal(fa.center_y, fb.center_y, false),
                               scalar(fa.from, fb.from, integral, path), scalar(fa.to, fb.to, integral, path)};
          } else if constexpr (std::is_same_v<F, CycleField>) {
            if (fa.key != fb.key) mismatch(path, "field axes differ");
            return CycleField{fa.key, scalars(fa.values, fb.values, integral, path)};
          } else {
            return JitterField{decimal(fa.salt, fb.salt, true), scalar(fa.min, fb.min, integral, path),
                               scalar(fa.max, fb.max, integral, path)};
          }
        },
        a);
  }

  double t_;
};

}  // namespace

Program interpolate_programs(const Program& p, const Program& q, double t) {
  if (!(t >= 0 && t <= 1)) throw Error(ErrorCode::range, "interpolation parameter must lie in [0, 1]");
  return Interpolator(t).program(p, q);
}

}  // namespace splitweave
