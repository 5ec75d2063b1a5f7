#include <doctest.h>

#include "splitweave/parser.hpp"
#include "splitweave/samplers.hpp"
#include "support.hpp"

using namespace splitweave;

TEST_CASE("parse the minimal program") {
  Program p = test::minimal();
  REQUIRE(p.layers.size() == 1);
  CHECK(p.canvas.width == 256);
  CHECK(p.layers[0].fragmenter.kind == NodeKind::grid);
  CHECK(std::get<Decimal>(p.layers[0].fragmenter.param("rows")) == Decimal::from_int(2));
  CHECK(std::get<Decimal>(p.layers[0].fragmenter.param("cols")) == Decimal::from_int(2));
}

TEST_CASE("empty pattern expects a canvas") {
  try {
    parse("(pattern)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    bool wants_canvas = false;
    for (const auto& x : e.expected()) wants_canvas |= x.find("canvas") != std::string::npos;
    CHECK(wants_canvas);
    CHECK(e.span().start_line == 1);
  }
}

TEST_CASE("negative rows parse but fail validation at the rows path") {
  const char* text =
      "(pattern (canvas :width 256 :height 256 :background \"#FFFFFF\") (layer (grid :rows -1 :cols 2) "
      "(fill :color (const :value \"#000000\"))))";
  Program raw = parse_unchecked(text);
  auto expected = validate(raw);
  REQUIRE(expected.size() == 1);
  try {
    parse(text);
    FAIL("expected SemanticError");
  } catch (const SemanticError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    CHECK(e.diagnostics()[0].path == "/layer[0]/fragmenter/param[rows]");
    CHECK(e.diagnostics() == expected);
  }
}

TEST_CASE("parse errors carry line and column") {
  const char* text = "(pattern\n  (canvas :width 256 :height 256)\n  (layer (grid :rows 2 :bogus 3)))";
  try {
    parse(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.span().start_line == 3);
    // ":bogus" starts at column 24 of line 3.
    CHECK(e.span().start_col == 24);
  }
  CHECK_THROWS_AS(parse("(pattern (canvas) (layer (grid)) ) extra"), ParseError);
  CHECK_THROWS_AS(parse("(pattern (canvas :width 256 :width 300) (layer (grid) (fill)))"), ParseError);
  CHECK_THROWS_AS(parse("\"unterminated"), ParseError);
}

TEST_CASE("print round trip and idempotence") {
  Program p = test::minimal();
  std::string once = print(p);
  Program q = parse(once);
  CHECK(ast_equals(p, q));
  CHECK(print(q) == once);
  CHECK(once.find('\r') == std::string::npos);
  CHECK(once.back() == '\n');
}

TEST_CASE("comments and whitespace are insignificant") {
  std::string text = std::string("; leading comment\n") + test::kMinimal + "  ; trailing\n";
  CHECK(ast_equals(parse(text), test::minimal()));
}

TEST_CASE("every field form round trips") {
  const char* fields[] = {
      "(const :value 0.5)",
      "(alt :axis row :values (0.8 1.2))",
      "(ramp :axis col :from 0 :to 90)",
      "(checker :values (0 45))",
      "(radial :center (0.25 0.75) :from 0 :to 180)",
      "(cycle :key id :values (0 15 30))",
      "(jitter :salt 7 :min -10 :max 10)",
  };
  for (const char* f : fields) {
    CAPTURE(f);
    Program p = parse(test::program_text("(grid :rows 2 :cols 2) (rotate :angle " + std::string(f) + ") (fill)"));
    CHECK(ast_equals(parse(print(p)), p));
    CHECK(print(parse(print(p))) == print(p));
  }
}

TEST_CASE("sampler corpus round trips") {
  auto motifs = MotifRegistry::builtins();
  for (Seed s = 0; s < 200; ++s) {
    for (StyleTag style : {StyleTag::mtp, StyleTag::sfp}) {
      Program p = sample_program(style, s, motifs);
      std::string text = print(p);
      Program q = parse(text);
      CHECK(ast_equals(p, q));
      CHECK(print(q) == text);
    }
  }
}
