// Acceptance suite: one PASS/FAIL line per headline criterion.
// Tolerances are pinned below; datasets are produced through the CLI.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <thread>

#include <json.hpp>

#include "splitweave/edits.hpp"
#include "splitweave/fields.hpp"
#include "support.hpp"

using namespace splitweave;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kRelationQuartets = 1000;
constexpr Seed kRelationSeed = 42;
constexpr double kRelationBudgetSeconds = 300;
constexpr std::size_t kRoundTripPerStyle = 1000;
constexpr int kPartitionCases = 500;
constexpr double kAreaTolerance = 5e-3;
constexpr double kOverlapTolerance = 1e-3;
constexpr int kVoronoiSplits = 50;
constexpr int kVoronoiPoints = 1000;
constexpr double kBisectorBand = 0.5;
constexpr double kVoronoiAgreement = 0.999;
constexpr int kJitterSamples = 10000;
constexpr double kKsLimit = 0.02;
constexpr int kEditPairs = 500;
constexpr int kAnimationPairs = 20;
constexpr std::size_t kDeskDataset = 10000;
constexpr double kDeskBudgetSeconds = 3600;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  try {
    report(name, body());
  } catch (const std::exception& e) {
    report(name, {false, std::string("exception: ") + e.what()});
  }
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

unsigned jobs() { return std::max(2u, std::thread::hardware_concurrency()); }

int run_cli(const std::string& args) {
  std::string cmd = "'" SW_CLI_PATH "' " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<ManifestRecord> read_manifest(const fs::path& dir) {
  std::vector<ManifestRecord> out;
  std::ifstream in(dir / "manifest.jsonl");
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(parse_manifest_line(line));
  return out;
}

fs::path sw_of(const fs::path& root, const std::string& svg_rel) {
  return root / fs::path(svg_rel).replace_extension(".sw");
}

// Every regular file under `a` exists under `b` with identical bytes, and vice versa.
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::size_t na = 0, nb = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++na;
    fs::path rel = fs::relative(e.path(), a);
    if (test::slurp(e.path()) != test::slurp(b / rel)) {
      why = rel.string() + " differs";
      return false;
    }
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) nb += e.is_regular_file();
  if (na != nb) {
    why = "file counts " + std::to_string(na) + " vs " + std::to_string(nb);
    return false;
  }
  why = std::to_string(na) + " files identical";
  return true;
}

const MotifRegistry& builtins() {
  static const MotifRegistry reg = MotifRegistry::builtins();
  return reg;
}

// Number of nodes of `kind` in layers [0, last].
std::size_t count_kind(const Program& p, NodeKind kind, std::size_t last) {
  std::size_t n = 0;
  for (std::size_t li = 0; li <= last; ++li) {
    const Layer& l = p.layers[li];
    n += l.fragmenter.kind == kind;
    for (const auto* list : {&l.merges, &l.fragment_ops, &l.styles})
      for (const Node& node : *list) n += node.kind == kind;
  }
  return n;
}

// Changes literal values while keeping the program's structure.
Program perturb(Program p, std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  p.canvas.width = pick(128, 768);
  p.canvas.height = pick(128, 768);
  p.canvas.background = Color{static_cast<std::uint8_t>(pick(0, 255)), static_cast<std::uint8_t>(pick(0, 255)),
                              static_cast<std::uint8_t>(pick(0, 255))};
  for (Layer& l : p.layers) {
    for (Param& prm : l.fragmenter.params) {
      if (prm.name == "rows" || prm.name == "cols") prm.value = Decimal::from_int(pick(1, 9));
      if (prm.name == "sites") prm.value = Decimal::from_int(pick(2, 40));
      if (prm.name == "count") prm.value = Decimal::from_int(pick(1, 20));
    }
    for (Node& s : l.styles)
      for (Param& prm : s.params)
        if (std::holds_alternative<Color>(prm.value))
          prm.value = Color{static_cast<std::uint8_t>(pick(0, 255)), 0, static_cast<std::uint8_t>(pick(0, 255))};
  }
  return p;
}

}  // namespace

int main() {
  test::TempDir work("acceptance");
  const fs::path relation_dir = work / "relation";

  criterion("edit-relation", [&] {
    auto t0 = Clock::now();
    if (run_cli("dataset --count " + std::to_string(kRelationQuartets) + " --styles mtp,sfp --seed " +
                std::to_string(kRelationSeed) + " --jobs 8 --out '" + relation_dir.string() +
                "'") != 0)
      return Outcome{false, "dataset command failed"};
    double elapsed = seconds_since(t0);
    auto records = read_manifest(relation_dir);
    std::size_t ok = 0, changed = 0;
    std::map<std::string, int> styles;
    for (const ManifestRecord& r : records) {
      ++styles[std::string(style_tag_name(r.style))];
      EditDescriptor e = parse_edit(r.edit);
      Program a = parse(test::slurp(sw_of(relation_dir, r.a))), ap = parse(test::slurp(sw_of(relation_dir, r.a_prime)));
      Program b = parse(test::slurp(sw_of(relation_dir, r.b))), bp = parse(test::slurp(sw_of(relation_dir, r.b_prime)));
      ok += ast_equals(apply_edit(a, e), ap) && ast_equals(apply_edit(b, e), bp);
      changed += test::slurp(relation_dir / r.a) != test::slurp(relation_dir / r.a_prime) &&
                 test::slurp(relation_dir / r.b) != test::slurp(relation_dir / r.b_prime);
    }
    bool pass = records.size() == kRelationQuartets && ok == kRelationQuartets && changed == kRelationQuartets &&
                styles["mtp"] > 0 && styles["sfp"] > 0 && elapsed <= kRelationBudgetSeconds;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu/%zu relation holds, %zu/%zu visibly changed, %.1fs (limit %.0fs)", ok,
                  records.size(), changed, records.size(), elapsed, kRelationBudgetSeconds);
    return Outcome{pass, buf};
  });

  criterion("determinism", [&] {
    const fs::path again = work / "relation-again", serial = work / "relation-serial";
    std::string common = "dataset --count " + std::to_string(kRelationQuartets) + " --styles mtp,sfp --seed " +
                         std::to_string(kRelationSeed);
    if (run_cli(common + " --jobs 8 --out '" + again.string() + "'") != 0 ||
        run_cli(common + " --jobs 1 --out '" + serial.string() + "'") != 0)
      return Outcome{false, "dataset command failed"};
    std::string why_again, why_serial;
    bool a = same_tree(relation_dir, again, why_again);
    bool b = same_tree(relation_dir, serial, why_serial);
    return Outcome{a && b, "repeat: " + why_again + "; jobs 1 vs 8: " + why_serial};
  });

  criterion("parser-round-trip", [&] {
    std::size_t ok = 0, total = 0;
    for (StyleTag style : {StyleTag::mtp, StyleTag::sfp})
      for (Seed s = 0; s < kRoundTripPerStyle; ++s) {
        Program p = sample_program(style, s, builtins());
        std::string text = print(p);
        Program q = parse(text);
        ok += ast_equals(q, p) && print(q) == text;
        ++total;
      }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " programs"};
  });

  criterion("geometry-partition", [&] {
    std::mt19937_64 rng(2024);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    double worst_area = 0, worst_overlap = 0;
    int bad = 0;
    std::map<std::string, int> kinds;
    for (int i = 0; i < kPartitionCases; ++i) {
      CanvasSpec c{pick(64, 1024), pick(64, 1024), Color{}};
      FragmentSet fs;
      switch (i % 4) {
        case 0: fs = split_grid(c, pick(1, 16), pick(1, 16)); break;
        case 1: fs = split_brick(c, pick(1, 12), pick(1, 12), std::uniform_real_distribution<double>(0, 0.99)(rng)); break;
        case 2: fs = split_stripes(c, pick(1, 64), pick(0, 1) ? Orientation::vertical : Orientation::horizontal); break;
        default: fs = split_voronoi(c, pick(2, 256), rng(), pick(0, 3)); break;
      }
      ++kinds[std::to_string(i % 4)];
      double canvas = static_cast<double>(c.width * c.height), sum = 0;
      for (const Fragment& f : fs.fragments) sum += test::shoelace(f.boundary);
      double area_err = std::abs(sum - canvas) / canvas;
      double overlap = 0;
      bool all_convex = true;
      for (const Fragment& f : fs.fragments) all_convex &= test::convex(f.boundary);
      if (all_convex) overlap = test::convex_overlap(fs) / canvas;
      worst_area = std::max(worst_area, area_err);
      worst_overlap = std::max(worst_overlap, overlap);
      bad += !(all_convex && area_err <= kAreaTolerance && overlap <= kOverlapTolerance);
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d cases over 4 fragmenters, worst area error %.2e (limit %.0e), worst overlap %.2e (limit %.0e), %d failing",
                  kPartitionCases, worst_area, kAreaTolerance, worst_overlap, kOverlapTolerance, bad);
    return Outcome{bad == 0 && kinds.size() == 4, buf};
  });

  criterion("voronoi-oracle", [&] {
    std::mt19937_64 rng(77);
    long agree = 0, total = 0;
    for (int split = 0; split < kVoronoiSplits; ++split) {
      CanvasSpec c{512, 512, Color{}};
      int sites = std::uniform_int_distribution<int>(2, 120)(rng);
      VoronoiDiagram d = voronoi_diagram(c, sites, rng(), split % 3);
      // A 40 x 25 lattice of interior points, offset off the pixel grid.
      int counted = 0;
      for (int gy = 0; gy < 25; ++gy)
        for (int gx = 0; gx < 40; ++gx) {
          Vec2 p{(gx + 0.5) * c.width / 40.0 + 0.173, (gy + 0.5) * c.height / 25.0 + 0.291};
          auto n = test::nearest_site(d.sites, p);
          if (n.bisector_distance < kBisectorBand) continue;
          ++counted;
          agree += test::contains(d.cells.fragments[n.site].boundary, p.x, p.y);
        }
      total += counted;
    }
    double rate = total ? static_cast<double>(agree) / total : 0;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%ld/%ld lattice points agree (%.4f%%, need %.1f%%) over %d splits x %d points", agree,
                  total, 100 * rate, 100 * kVoronoiAgreement, kVoronoiSplits, kVoronoiPoints);
    return Outcome{rate >= kVoronoiAgreement, buf};
  });

  criterion("field-semantics", [&] {
    const CanvasSpec c{300, 200, Color{}};
    auto num = [](double v) { return Decimal::from_double(v); };
    auto eval_all = [&](const FieldExpr& f, const FragmentSet& fs) {
      std::vector<Scalar> out;
      for (std::size_t i = 0; i < fs.fragments.size(); ++i) out.push_back(eval_field(f, field_context(fs, i, c, 5)));
      return out;
    };
    std::vector<FragmentSet> sets{split_grid(c, 4, 7), split_brick(c, 5, 3, 0.5),
                                  split_stripes(c, 9, Orientation::horizontal), split_voronoi(c, 30, 3, 1)};
    int alt_ok = 0, ramp_ok = 0;
    for (const FragmentSet& fs : sets) {
      alt_ok += eval_all(AltField{Axis::id, {num(1.25)}}, fs) == eval_all(ConstField{num(1.25)}, fs);
      ramp_ok += eval_all(RampField{Axis::id, num(-3), num(-3)}, fs) == eval_all(ConstField{num(-3)}, fs);
    }
    FragmentSet one = split_grid(c, 1, 1);
    bool checker_ok = eval_all(CheckerField{{num(2), num(8)}}, one) == eval_all(ConstField{num(2)}, one);

    JitterField jit{Decimal::from_int(17), num(0), num(1)};
    std::vector<double> xs;
    bool deterministic = true;
    for (int id = 0; id < kJitterSamples; ++id) {
      Fragment f = make_fragment(id, std::nullopt, std::nullopt, rect_polygon(0, 0, 1, 1));
      FieldContext ctx{f, kJitterSamples, {}, {}, c, 99};
      double a = std::get<Decimal>(eval_field(jit, ctx)).to_double();
      deterministic &= a == std::get<Decimal>(eval_field(jit, ctx)).to_double();
      xs.push_back(a);
    }
    double ks = test::ks_uniform(xs);
    bool pass = alt_ok == 4 && ramp_ok == 4 && checker_ok && deterministic && ks < kKsLimit;
    char buf[200];
    std::snprintf(buf, sizeof buf, "alt(single)=const %d/4, ramp(from=to)=const %d/4, checker 1x1 %s, jitter determinism %s, KS %.4f (limit %.2f)",
                  alt_ok, ramp_ok, checker_ok ? "ok" : "bad", deterministic ? "ok" : "bad", ks, kKsLimit);
    return Outcome{pass, buf};
  });

  criterion("edit-algebra", [&] {
    std::mt19937_64 rng(31);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int pairs = 0, recovered = 0;
    for (Seed s = 0; pairs < kEditPairs; ++s) {
      Program p = sample_program(s % 2 ? StyleTag::sfp : StyleTag::mtp, s, builtins());
      std::size_t layer = static_cast<std::size_t>(pick(0, static_cast<int>(p.layers.size()) - 1));
      Subtree payload;
      NodeKind kind = NodeKind::outline;
      bool new_layer = false;
      switch (pick(0, 5)) {
        case 0: kind = NodeKind::outline; payload = make_node(kind, {{"width", Decimal::from_int(pick(1, 6))}}); break;
        case 1: kind = NodeKind::place_motif; payload = make_node(kind, {{"motif", Text{"star5"}}}); break;
        case 2: kind = NodeKind::inset; payload = make_node(kind, {{"distance", Decimal::from_int(pick(1, 4))}}); break;
        case 3: kind = NodeKind::rotate; payload = make_node(kind, {{"angle", Decimal::from_int(pick(-90, 90))}}); break;
        case 4: kind = NodeKind::round; payload = make_node(kind, {{"radius", Decimal::from_int(pick(1, 9))}}); break;
        default: {
          new_layer = true;
          Layer l;
          l.fragmenter = make_node(NodeKind::stripes, {{"count", Decimal::from_int(pick(2, 9))}});
          l.styles.push_back(make_node(NodeKind::outline));
          payload = l;
        }
      }
      EditDescriptor ins{EditKind::insert, {"layer", layer, {}}, payload};
      if (!is_compatible(p, ins)) continue;
      EditDescriptor rm{EditKind::remove,
                        new_layer ? NodeSelector{"layer", p.layers.size(), {}}
                                  : NodeSelector{std::string(kind_name(kind)), count_kind(p, kind, layer), {}},
                        std::nullopt};
      ++pairs;
      recovered += ast_equals(apply_edit(apply_edit(p, ins), rm), p);
    }

    // Constructed negative cases.
    Program base = test::minimal();
    Program full_styles = base;
    while (full_styles.layers[0].styles.size() < kMaxStyles) full_styles.layers[0].styles.push_back(make_node(NodeKind::outline));
    Program full_layers = base;
    while (full_layers.layers.size() < kMaxLayers) full_layers.layers.push_back(base.layers[0]);
    Program full_ops = base;
    while (full_ops.layers[0].fragment_ops.size() < kMaxFragmentOps) full_ops.layers[0].fragment_ops.push_back(make_node(NodeKind::inset));
    struct Negative {
      Program p;
      const char* edit;
    };
    const Negative negatives[] = {
        {base, "(edit :kind remove :target outline :ordinal 0)"},
        {base, "(edit :kind remove :target fragmenter :ordinal 0)"},
        {base, "(edit :kind remove :target fill :ordinal 0)"},
        {base, "(edit :kind remove :target layer :ordinal 0)"},
        {base, "(edit :kind remove :target layer :ordinal 3)"},
        {base, "(edit :kind insert :target layer :ordinal 0 :payload (voronoi))"},
        {base, "(edit :kind insert :target fill :ordinal 0 :payload (outline))"},
        {base, "(edit :kind insert :target layer :ordinal 1 :payload (outline))"},
        {base, "(edit :kind replace :target fragmenter :ordinal 0 :payload (fill))"},
        {base, "(edit :kind replace :target fill :ordinal 0 :payload (grid))"},
        {base, "(edit :kind replace :target grid :ordinal 0 :param rows :payload \"#000000\")"},
        {base, "(edit :kind replace :target grid :ordinal 0 :param nope :payload 3)"},
        {base, "(edit :kind replace :target layer :ordinal 0 :payload (outline))"},
        {base, "(edit :kind replace :target grid :ordinal 0 :param rows :payload (ramp :axis row :from 1 :to 2))"},
        {full_styles, "(edit :kind insert :target layer :ordinal 0 :payload (outline))"},
        {full_layers, "(edit :kind insert :target layer :ordinal 0 :payload (layer (grid) (fill) :opacity 1))"},
        {full_ops, "(edit :kind insert :target layer :ordinal 0 :payload (rotate))"},
    };
    int raised = 0;
    for (const Negative& n : negatives) {
      try {
        apply_edit(n.p, parse_edit(n.edit));
      } catch (const Error& e) {
        raised += e.code() == ErrorCode::incompatible_edit;
      }
    }
    int neg_total = static_cast<int>(std::size(negatives));
    return Outcome{recovered == pairs && raised == neg_total,
                   std::to_string(recovered) + "/" + std::to_string(pairs) + " insert/remove pairs recovered; " +
                       std::to_string(raised) + "/" + std::to_string(neg_total) + " negative cases raised IncompatibleEdit"};
  });

  criterion("animation-endpoints", [&] {
    std::mt19937_64 rng(8);
    int ok = 0, distinct = 0;
    for (int i = 0; i < kAnimationPairs; ++i) {
      Program p = sample_program(i % 2 ? StyleTag::sfp : StyleTag::mtp, static_cast<Seed>(i), builtins());
      // Perturbations can produce unrenderable merge topologies; retry those.
      Program q = p;
      for (int attempt = 0; attempt < 20; ++attempt) {
        Program cand = perturb(p, rng);
        if (!validate(cand).empty()) continue;
        try {
          interpret(cand, 0, builtins());
        } catch (const Error&) {
          continue;
        }
        q = std::move(cand);
        break;
      }
      distinct += !ast_equals(p, q);
      fs::path dir = work / ("anim" + std::to_string(i));
      test::spit(dir / "p.sw", print(p));
      test::spit(dir / "q.sw", print(q));
      if (run_cli("animate '" + (dir / "p.sw").string() + "' '" + (dir / "q.sw").string() + "' --frames 2 --out '" +
                  (dir / "frames").string() + "'") != 0) {
        std::fprintf(stderr, "animation pair %d: animate failed\n", i);
        continue;
      }
      Program f0 = parse(test::slurp(dir / "frames" / "frame_0000.sw"));
      Program f1 = parse(test::slurp(dir / "frames" / "frame_0001.sw"));
      bool svg_ok = test::slurp(dir / "frames" / "frame_0000.svg") == emit_svg(interpret(p, 0, builtins())) &&
                    test::slurp(dir / "frames" / "frame_0001.svg") == emit_svg(interpret(q, 0, builtins()));
      bool pass = ast_equals(f0, p) && ast_equals(f1, q) && svg_ok;
      if (!pass) std::fprintf(stderr, "animation pair %d: %s%s%s\n", i, ast_equals(f0, p) ? "" : "start ",
                              ast_equals(f1, q) ? "" : "end ", svg_ok ? "" : "svg");
      ok += pass;
    }
    return Outcome{ok == kAnimationPairs && distinct == kAnimationPairs,
                   std::to_string(ok) + "/" + std::to_string(kAnimationPairs) +
                       " program pairs reproduced exactly at both endpoints (" + std::to_string(distinct) + " distinct)"};
  });

  criterion("desk-scale-dataset", [&] {
    const fs::path dir = work / "desk";
    auto t0 = Clock::now();
    int code = run_cli("dataset --count " + std::to_string(kDeskDataset) + " --styles mtp,sfp --seed 7 --jobs " +
                       std::to_string(jobs()) + " --out '" + dir.string() + "'");
    double elapsed = seconds_since(t0);
    if (code != 0) return Outcome{false, "dataset command exited " + std::to_string(code)};
    auto problems = audit_dataset(dir);
    std::size_t n = read_manifest(dir).size();
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu quartets in %.1fs (limit %.0fs), audit problems: %zu", n, elapsed,
                  kDeskBudgetSeconds, problems.size());
    return Outcome{n == kDeskDataset && problems.empty() && elapsed <= kDeskBudgetSeconds, buf};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
