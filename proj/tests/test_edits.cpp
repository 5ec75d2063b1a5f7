#include <doctest.h>

#include <set>

#include <json.hpp>

#include "splitweave/edits.hpp"
#include "support.hpp"

using namespace splitweave;
namespace fs = std::filesystem;

namespace {

const MotifRegistry& builtins() {
  static const MotifRegistry reg = MotifRegistry::builtins();
  return reg;
}

EditDescriptor edit(const std::string& text) { return parse_edit(text); }

ErrorCode code_of(const Program& p, const EditDescriptor& e) {
  try {
    apply_edit(p, e);
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("edit applied");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("edit descriptors round trip") {
  const char* forms[] = {
      "(edit :kind remove :target outline :ordinal 0)",
      "(edit :kind replace :target fragmenter :ordinal 0 :payload (grid :rows 3 :cols 3))",
      "(edit :kind replace :target place-motif :ordinal 1 :param motif :payload \"star5\")",
      "(edit :kind replace :target fill :ordinal 0 :param color :payload (cycle :key id :colors (\"#000000\" \"#FFFFFF\")))",
      "(edit :kind insert :target layer :ordinal 0 :payload (outline :color \"#101010\" :width 2))",
  };
  for (const char* f : forms) {
    EditDescriptor e = edit(f);
    CHECK(parse_edit(print_edit(e)) == e);
    CHECK(print_edit(parse_edit(print_edit(e))) == print_edit(e));
  }
  CHECK_THROWS_AS(parse_edit("(edit :kind remove :target outline :ordinal 0 :payload 3)"), ParseError);
  CHECK_THROWS_AS(parse_edit("(edit :kind insert :target layer :ordinal 0)"), ParseError);
  CHECK_THROWS_AS(parse_edit("(edit :kind twist :target layer :ordinal 0)"), ParseError);
}

TEST_CASE("selectors walk layers in pre-order") {
  Program p = parse(
      "(pattern (canvas :width 64 :height 64 :background \"#FFFFFF\")"
      " (layer (grid) (inset) (fill) (outline))"
      " (layer (voronoi) (outline) (place-motif)))");
  CHECK(select(p, {"outline", 1, {}})->str() == "/layer[1]/style[0]");
  CHECK(select(p, {"style", 2, {}})->str() == "/layer[1]/style[0]");
  CHECK(select(p, {"fragmenter", 1, {}})->str() == "/layer[1]/fragmenter");
  CHECK(select(p, {"layer", 1, {}})->str() == "/layer[1]");
  CHECK(select(p, {"outline", 0, "width"})->str() == "/layer[0]/style[1]/param[width]");
  CHECK_FALSE(select(p, {"outline", 2, {}}));
  CHECK_FALSE(select(p, {"outline", 0, "nope"}));
}

TEST_CASE("compatibility rules") {
  Program p = test::minimal();
  CHECK(is_compatible(p, edit("(edit :kind replace :target fragmenter :ordinal 0 :payload (voronoi :sites 9))")));
  CHECK_FALSE(is_compatible(p, edit("(edit :kind remove :target outline :ordinal 0)")));
  // Style slot at its arity limit.
  Program full = p;
  while (full.layers[0].styles.size() < kMaxStyles) full.layers[0].styles.push_back(make_node(NodeKind::outline));
  CHECK(validate(full).empty());
  CHECK_FALSE(is_compatible(full, edit("(edit :kind insert :target layer :ordinal 0 :payload (outline :width 2))")));
  CHECK(is_compatible(p, edit("(edit :kind insert :target layer :ordinal 0 :payload (outline :width 2))")));
  // Family mismatches and fragmenter rules.
  CHECK_FALSE(is_compatible(p, edit("(edit :kind replace :target fragmenter :ordinal 0 :payload (fill))")));
  CHECK_FALSE(is_compatible(p, edit("(edit :kind remove :target fragmenter :ordinal 0)")));
  CHECK_FALSE(is_compatible(p, edit("(edit :kind insert :target layer :ordinal 0 :payload (grid))")));
  CHECK_FALSE(is_compatible(p, edit("(edit :kind remove :target fill :ordinal 0)")));
  CHECK_FALSE(is_compatible(p, edit("(edit :kind remove :target layer :ordinal 0)")));
  CHECK_FALSE(is_compatible(p, edit("(edit :kind replace :target grid :ordinal 0 :param rows :payload \"#FFFFFF\")")));
}

TEST_CASE("apply_edit semantics") {
  Program p = test::minimal();
  Program q = apply_edit(p, edit("(edit :kind replace :target fragmenter :ordinal 0 :payload (grid :rows 3 :cols 3))"));
  Program expect = p;
  expect.layers[0].fragmenter = make_node(NodeKind::grid, {{"rows", Decimal::from_int(3)}, {"cols", Decimal::from_int(3)}});
  CHECK(ast_equals(q, expect));

  Program with = apply_edit(p, edit("(edit :kind insert :target layer :ordinal 0 :payload (outline :width 2))"));
  CHECK(with.layers[0].styles.size() == 2);
  Program back = apply_edit(with, edit("(edit :kind remove :target outline :ordinal 0)"));
  CHECK(ast_equals(back, p));

  CHECK(code_of(p, edit("(edit :kind remove :target outline :ordinal 0)")) == ErrorCode::incompatible_edit);
  // Structurally fine but out of range: the result fails validation.
  CHECK(code_of(p, edit("(edit :kind replace :target grid :ordinal 0 :param rows :payload 0)")) ==
        ErrorCode::invalid_result);
  try {
    apply_edit(p, edit("(edit :kind remove :target outline :ordinal 0)"));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("outline#0") != std::string::npos);
  }
}

TEST_CASE("sample_edit determinism and coverage") {
  for (StyleTag style : {StyleTag::mtp, StyleTag::sfp}) {
    std::set<EditKind> kinds;
    for (Seed s = 0; s < 1000; ++s) {
      EditDescriptor e = sample_edit(s, style, builtins());
      CHECK(e == sample_edit(s, style, builtins()));
      CHECK(parse_edit(print_edit(e)) == e);
      kinds.insert(e.kind);
    }
    CHECK(kinds.size() == 3);
  }
}

TEST_CASE("quartets satisfy the analogy relation") {
  for (Seed s = 0; s < 60; ++s) {
    StyleTag style = s % 2 ? StyleTag::sfp : StyleTag::mtp;
    Quartet q = make_quartet(s, style, builtins());
    CHECK(ast_equals(apply_edit(q.a, q.edit), q.a_prime));
    CHECK(ast_equals(apply_edit(q.b, q.edit), q.b_prime));
    CHECK_FALSE(ast_equals(q.a, q.a_prime));
    CHECK_FALSE(ast_equals(q.b, q.b_prime));
    CHECK(q.image_a.svg != q.image_a_prime.svg);
    CHECK(q.image_b.svg != q.image_b_prime.svg);
    CHECK(q.a.layers.size() == 1);
    CHECK(fragment_count(q.a, s) <= fragment_count(q.b, s));
    Quartet again = make_quartet(s, style, builtins());
    CHECK(again.image_b_prime.svg == q.image_b_prime.svg);
  }
}

TEST_CASE("assemble_quartet names the incompatible side") {
  Program a = test::minimal();
  Program b = apply_edit(a, edit("(edit :kind insert :target layer :ordinal 0 :payload (outline :width 2))"));
  EditDescriptor rm = edit("(edit :kind remove :target outline :ordinal 0)");
  try {
    assemble_quartet(b, rm, a, 0, builtins());
    FAIL("expected incompatible_edit");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).starts_with("b: "));
  }
  Quartet q = assemble_quartet(b, rm, b, 0, builtins());
  CHECK(ast_equals(q.a_prime, a));
}

TEST_CASE("ids, seeds and the split rule") {
  CHECK(quartet_id(0) == "q0000000");
  CHECK(quartet_id(1234) == "q0001234");
  CHECK(quartet_seed(42, 3) == derive_seed(42, "quartet", 3));
  // Independent FNV-1a.
  auto fnv = [](const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
  };
  int val = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    std::string id = quartet_id(i);
    CHECK(split_for(id) == (fnv(id) % 100 < 5 ? "val" : "train"));
    val += split_for(id) == "val";
  }
  CHECK(val > 40);
  CHECK(val < 200);
}

TEST_CASE("manifest lines round trip with fixed field order") {
  ManifestRecord r{"q0000007", 18446744073709551615ULL, StyleTag::sfp, "(edit :kind remove :target outline :ordinal 0)",
                   "sfp/q0000007/a.svg", "sfp/q0000007/a_prime.svg", "sfp/q0000007/b.svg",
                   "sfp/q0000007/b_prime.svg", "train"};
  std::string line = manifest_line(r);
  CHECK(parse_manifest_line(line) == r);
  auto doc = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (auto& [k, v] : doc.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "seed", "style", "edit", "a", "a_prime", "b", "b_prime", "split"});
}

TEST_CASE("dataset writer is worker-count invariant and audits clean") {
  test::TempDir one("ds1"), four("ds4");
  DatasetOptions opts;
  opts.count = 12;
  opts.master_seed = 9;
  opts.out_dir = one.path;
  opts.workers = 1;
  DatasetManifest m1 = write_dataset(opts, builtins());
  opts.out_dir = four.path;
  opts.workers = 4;
  DatasetManifest m4 = write_dataset(opts, builtins());
  CHECK(test::slurp(m1.path) == test::slurp(m4.path));
  REQUIRE(m1.records.size() == 12);
  for (const ManifestRecord& r : m1.records)
    for (const std::string& rel : {r.a, r.a_prime, r.b, r.b_prime}) CHECK(test::slurp(one.path / rel) == test::slurp(four.path / rel));
  CHECK(audit_dataset(one.path).empty());
  CHECK_FALSE(fs::exists(one.path / "manifest.jsonl.tmp"));

  // Tampering is detected.
  fs::path victim = one.path / m1.records[3].b_prime;
  fs::remove(victim);
  auto problems = audit_dataset(one.path);
  CHECK_FALSE(problems.empty());
}

TEST_CASE("dataset writes rasters on request") {
  test::TempDir dir("dspng");
  DatasetOptions opts;
  opts.count = 2;
  opts.out_dir = dir.path;
  opts.raster_size = 32;
  DatasetManifest m = write_dataset(opts, builtins());
  fs::path png = dir.path / fs::path(m.records[0].a).replace_extension(".png");
  REQUIRE(fs::exists(png));
  auto bytes = test::slurp(png);
  std::vector<std::uint8_t> data(bytes.begin(), bytes.end());
  CHECK(png_dimensions(data).first == 32);
}
