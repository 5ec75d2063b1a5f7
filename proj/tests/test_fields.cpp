#include <doctest.h>

#include "splitweave/fields.hpp"
#include "support.hpp"

using namespace splitweave;
using doctest::Approx;

namespace {

const CanvasSpec kCanvas{100, 100, Color{255, 255, 255}};

Decimal num(double v) { return Decimal::from_double(v); }

double as_number(const Scalar& s) { return std::get<Decimal>(s).to_double(); }

// Evaluates `f` on every fragment of `fs`.
std::vector<Scalar> eval_all(const FieldExpr& f, const FragmentSet& fs, Seed seed = 0) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < fs.fragments.size(); ++i) out.push_back(eval_field(f, field_context(fs, i, kCanvas, seed)));
  return out;
}

}  // namespace

TEST_CASE("alt picks by index modulo length") {
  FragmentSet fs = split_grid(kCanvas, 4, 1);
  auto v = eval_all(AltField{Axis::row, {num(0.8), num(1.2)}}, fs);
  CHECK(as_number(v[3]) == Approx(1.2));
  CHECK(as_number(v[2]) == Approx(0.8));
}

TEST_CASE("ramp over four columns at col 1 is one third of the way") {
  FragmentSet fs = split_grid(kCanvas, 1, 4);
  auto v = eval_all(RampField{Axis::col, num(0), num(90)}, fs);
  CHECK(as_number(v[1]) == Approx(0 + 90.0 * (1.0 / 3.0)).epsilon(1e-6));
  CHECK(as_number(v[0]) == 0);
  CHECK(as_number(v[3]) == 90);
}

TEST_CASE("degenerate fields equal const everywhere") {
  for (const FragmentSet& fs : {split_grid(kCanvas, 3, 5), split_brick(kCanvas, 4, 3, 0.5),
                                split_stripes(kCanvas, 6, Orientation::vertical)}) {
    auto c = eval_all(ConstField{num(0.7)}, fs);
    CHECK(eval_all(AltField{Axis::row, {num(0.7)}}, fs) == c);
    CHECK(eval_all(AltField{Axis::id, {num(0.7)}}, fs) == c);
    CHECK(eval_all(CycleField{Axis::col, {num(0.7)}}, fs) == c);
    CHECK(eval_all(RampField{Axis::col, num(0.7), num(0.7)}, fs) == c);
    CHECK(eval_all(RadialField{num(0.5), num(0.5), num(0.7), num(0.7)}, fs) == c);
  }
  FragmentSet one = split_grid(kCanvas, 1, 1);
  CHECK(eval_all(CheckerField{{num(3), num(9)}}, one) == eval_all(ConstField{num(3)}, one));
}

TEST_CASE("checker alternates like a chessboard") {
  FragmentSet fs = split_grid(kCanvas, 3, 3);
  auto v = eval_all(CheckerField{{Color{0, 0, 0}, Color{255, 255, 255}}}, fs);
  for (const Fragment& f : fs.fragments)
    CHECK(std::get<Color>(v[f.id]) == ((*f.row + *f.col) % 2 ? Color{255, 255, 255} : Color{0, 0, 0}));
}

TEST_CASE("radial reaches its endpoints at the center and corners") {
  Fragment center = make_fragment(0, std::nullopt, std::nullopt, rect_polygon(49, 49, 51, 51));
  Fragment corner = make_fragment(1, std::nullopt, std::nullopt, rect_polygon(0, 0, 1e-3, 1e-3));
  RadialField f{num(0.5), num(0.5), num(10), num(20)};
  CHECK(as_number(eval_field(f, FieldContext{center, 2, {}, {}, kCanvas, 0})) == Approx(10));
  CHECK(as_number(eval_field(f, FieldContext{corner, 2, {}, {}, kCanvas, 0})) == Approx(20).epsilon(1e-4));
}

TEST_CASE("color ramps interpolate in sRGB") {
  FragmentSet fs = split_grid(kCanvas, 1, 3);
  auto v = eval_all(RampField{Axis::col, Color{0, 0, 0}, Color{200, 100, 51}}, fs);
  CHECK(std::get<Color>(v[1]) == Color{100, 50, 26});  // 25.5 rounds up
}

TEST_CASE("missing axes raise axis_unavailable") {
  FragmentSet fs = split_voronoi(kCanvas, 5, 1, 0);
  try {
    eval_all(AltField{Axis::row, {num(1)}}, fs);
    FAIL("expected axis_unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::axis_unavailable);
  }
}

TEST_CASE("jitter is deterministic, keyed by id, and uniform") {
  JitterField f{Decimal::from_int(3), num(0), num(1)};
  std::vector<double> xs;
  for (int id = 0; id < 10000; ++id) {
    Fragment frag = make_fragment(id, std::nullopt, std::nullopt, rect_polygon(0, 0, 1, 1));
    FieldContext ctx{frag, 10000, {}, {}, kCanvas, 12345};
    double a = as_number(eval_field(f, ctx));
    double b = as_number(eval_field(f, ctx));
    CHECK(a == b);
    xs.push_back(a);
  }
  CHECK(test::ks_uniform(xs) < 0.02);
  CHECK(jitter_unit(1, 3, 5) != jitter_unit(2, 3, 5));
  CHECK(jitter_unit(1, 3, 5) != jitter_unit(1, 4, 5));
}

TEST_CASE("field_range bounds") {
  CHECK(std::get<NumericRange>(field_range(ConstField{num(0.5)})) == NumericRange{0.5, 0.5});
  CHECK(std::get<NumericRange>(field_range(RampField{Axis::id, num(0), num(90)})) == NumericRange{0, 90});
  CHECK(std::get<NumericRange>(field_range(AltField{Axis::row, {num(0.8), num(1.2)}})) == NumericRange{0.8, 1.2});
  auto colors = std::get<std::vector<Color>>(field_range(CycleField{Axis::id, {Color{1, 2, 3}, Color{1, 2, 3}}}));
  CHECK(colors.size() == 1);
}

TEST_CASE("field values always fall inside field_range") {
  std::mt19937_64 rng(11);
  FragmentSet fs = split_brick(kCanvas, 5, 5, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = [&] { return num(std::uniform_real_distribution<double>(-50, 50)(rng)); };
    std::vector<FieldExpr> fields{ConstField{r()},
                                  AltField{Axis::col, {r(), r(), r()}},
                                  RampField{Axis::row, r(), r()},
                                  CheckerField{{r(), r()}},
                                  RadialField{num(0.2), num(0.9), r(), r()},
                                  CycleField{Axis::id, {r(), r()}},
                                  JitterField{Decimal::from_int(trial), r(), r()}};
    for (const FieldExpr& f : fields) {
      auto range = std::get<NumericRange>(field_range(f));
      for (const Scalar& s : eval_all(f, fs, static_cast<Seed>(trial))) {
        CHECK(as_number(s) >= range.min - 1e-6);
        CHECK(as_number(s) <= range.max + 1e-6);
      }
    }
  }
}
