#include <algorithm>
#include <cmath>

#include "splitweave/fields.hpp"

namespace splitweave {

namespace {

constexpr double kHalfDiagonal = 0.70710678118654752440;

[[noreturn]] void axis_unavailable(Axis axis) {
  throw Error(ErrorCode::axis_unavailable, "fragment has no " + std::string(axis_name(axis)) + " index");
}

int axis_index(Axis axis, const FieldContext& ctx) {
  switch (axis) {
    case Axis::id: return ctx.fragment.id;
    case Axis::row:
      if (!ctx.fragment.row) axis_unavailable(axis);
      return *ctx.fragment.row;
    case Axis::col:
      if (!ctx.fragment.col) axis_unavailable(axis);
      return *ctx.fragment.col;
  }
  return 0;
}

int axis_count(Axis axis, const FieldContext& ctx) {
  switch (axis) {
    case Axis::id: return ctx.fragment_count;
    case Axis::row:
      if (!ctx.row_count) axis_unavailable(axis);
      return *ctx.row_count;
    case Axis::col:
      if (!ctx.col_count) axis_unavailable(axis);
      return *ctx.col_count;
  }
  return 1;
}

const Scalar& pick(const std::vector<Scalar>& values, int index) {
  if (values.empty()) throw Error(ErrorCode::field_type, "field has no values");
  return values[static_cast<std::size_t>(index) % values.size()];
}

Scalar interpolate(const Scalar& from, const Scalar& to, double t) {
  if (from.index() != to.index()) throw Error(ErrorCode::field_type, "field mixes numbers and colors");
  if (const Decimal* a = std::get_if<Decimal>(&from)) {
    double x = a->to_double(), y = std::get<Decimal>(to).to_double();
    return Decimal::from_double(x + (y - x) * t);
  }
  return lerp(std::get<Color>(from), std::get<Color>(to), t);
}

}  // namespace

FieldContext field_context(const FragmentSet& fs, std::size_t index, const CanvasSpec& canvas, Seed seed) {
  FieldContext ctx{fs.fragments[index], static_cast<int>(fs.fragments.size()), std::nullopt, std::nullopt, canvas,
                   seed};
  if (fs.row_count > 0) ctx.row_count = fs.row_count;
  if (fs.col_count > 0) ctx.col_count = fs.col_count;
  return ctx;
}

double jitter_unit(Seed program_seed, std::int64_t salt, int fragment_id) {
  Seed key = mix64(mix64(program_seed ^ hash_string("jitter")) + static_cast<std::uint64_t>(salt) * kGoldenGamma);
  Stream s(mix64(key + static_cast<std::uint64_t>(fragment_id)));
  return s.uniform();
}

Scalar eval_field(const FieldExpr& field, const FieldContext& ctx) {
  return std::visit(
      [&](const auto& f) -> Scalar {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstField>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, AltField>) {
          return pick(f.values, axis_index(f.axis, ctx));
        } else if constexpr (std::is_same_v<T, CycleField>) {
          return pick(f.values, axis_index(f.key, ctx));
        } else if constexpr (std::is_same_v<T, RampField>) {
          int count = axis_count(f.axis, ctx);
          double t = count <= 1 ? 0.0 : static_cast<double>(axis_index(f.axis, ctx)) / (count - 1);
          return interpolate(f.from, f.to, t);
        } else if constexpr (std::is_same_v<T, CheckerField>) {
          if (f.values.size() != 2) throw Error(ErrorCode::field_type, "checker takes exactly two values");
          return f.values[static_cast<std::size_t>(axis_index(Axis::row, ctx) + axis_index(Axis::col, ctx)) % 2];
        } else if constexpr (std::is_same_v<T, RadialField>) {
          double ux = ctx.fragment.centroid.x / static_cast<double>(ctx.canvas.width);
          double uy = ctx.fragment.centroid.y / static_cast<double>(ctx.canvas.height);
          double dx = ux - f.center_x.to_double(), dy = uy - f.center_y.to_double();
          double t = std::clamp(std::sqrt(dx * dx + dy * dy) / kHalfDiagonal, 0.0, 1.0);
          return interpolate(f.from, f.to, t);
        } else {
          double u = jitter_unit(ctx.program_seed, f.salt.round_half_up(), ctx.fragment.id);
          return interpolate(f.min, f.max, u);
        }
      },
      field);
}

Scalar eval_value(const Value& value, const FieldContext& ctx) {
  if (const Decimal* d = std::get_if<Decimal>(&value)) return *d;
  if (const Color* c = std::get_if<Color>(&value)) return *c;
  if (const FieldExpr* f = std::get_if<FieldExpr>(&value)) return eval_field(*f, ctx);
  throw Error(ErrorCode::field_type, "parameter is not a number or color");
}

double eval_number(const Value& value, const FieldContext& ctx) {
  Scalar s = eval_value(value, ctx);
  if (const Decimal* d = std::get_if<Decimal>(&s)) return d->to_double();
  throw Error(ErrorCode::field_type, "color value used in a numeric slot");
}

Color eval_color(const Value& value, const FieldContext& ctx) {
  Scalar s = eval_value(value, ctx);
  if (const Color* c = std::get_if<Color>(&s)) return *c;
  throw Error(ErrorCode::field_type, "numeric value used in a color slot");
}

FieldRange field_range(const FieldExpr& field) {
  std::vector<const Scalar*> scalars;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstField>) {
          scalars.push_back(&f.value);
        } else if constexpr (std::is_same_v<T, RampField> || std::is_same_v<T, RadialField>) {
          scalars.push_back(&f.from);
          scalars.push_back(&f.to);
        } else if constexpr (std::is_same_v<T, JitterField>) {
          scalars.push_back(&f.min);
          scalars.push_back(&f.max);
        } else {
          for (const Scalar& s : f.values) scalars.push_back(&s);
        }
      },
      field);
  bool numeric = !scalars.empty() && std::holds_alternative<Decimal>(*scalars.front());
  if (numeric) {
    NumericRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Scalar* s : scalars) {
      if (const Decimal* d = std::get_if<Decimal>(s)) {
        r.min = std::min(r.min, d->to_double());
        r.max = std::max(r.max, d->to_double());
      }
    }
    return r;
  }
  std::vector<Color> colors;
  for (const Scalar* s : scalars)
    if (const Color* c = std::get_if<Color>(s))
      if (std::find(colors.begin(), colors.end(), *c) == colors.end()) colors.push_back(*c);
  return colors;
}

FragmentSet merge_fragments(const FragmentSet& fs, const FieldExpr& key, const CanvasSpec& canvas, Seed seed) {
  std::vector<std::int64_t> keys;
  keys.reserve(fs.fragments.size());
  for (std::size_t i = 0; i < fs.fragments.size(); ++i) {
    Scalar v = eval_field(key, field_context(fs, i, canvas, seed));
    const Decimal* d = std::get_if<Decimal>(&v);
    if (!d || !d->is_integer()) throw Error(ErrorCode::field_type, "merge key must evaluate to an integer");
    keys.push_back(d->round_half_up());
  }
  return merge_by_keys(fs, keys);
}

}  // namespace splitweave
