#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "splitweave/edits.hpp"
#include "splitweave/parser.hpp"

namespace splitweave {

std::size_t fragment_count(const Program& p, Seed seed) {
  std::size_t n = 0;
  for (const FragmentSet& fs : layer_fragments(p, seed)) n += fs.fragments.size();
  return n;
}

namespace {

constexpr int kEditRetries = 8;
constexpr int kProgramAttempts = 64;

struct Side {
  Program before, after;
  PatternImage image_before, image_after;
  std::size_t fragments = 0;
};

RenderOptions render_options(const QuartetOptions& opts) {
  RenderOptions r;
  r.precision = opts.precision;
  r.raster_size = opts.raster_size;
  return r;
}

// Applies `e` and renders both programs; nothing when the pair is unusable
// (trivial edit, invalid result, render failure, or identical images).
std::optional<Side> edited_side(const Program& z, const EditDescriptor& e, Seed seed, const MotifRegistry& motifs,
                                const QuartetOptions& opts) {
  if (!is_compatible(z, e)) return std::nullopt;
  try {
    Side side;
    side.before = z;
    side.after = apply_edit(z, e);
    if (side.after == side.before) return std::nullopt;
    side.fragments = fragment_count(z, seed);
    RenderOptions r = render_options(opts);
    side.image_before = render(side.before, seed, r, motifs);
    side.image_after = render(side.after, seed, r, motifs);
    if (side.image_before.svg == side.image_after.svg) return std::nullopt;
    return side;
  } catch (const Error&) {
    return std::nullopt;
  }
}

template <typename Accept>
std::optional<Side> find_side(Seed seed, std::string_view purpose, int retry, StyleTag style,
                              const EditDescriptor& e, const MotifRegistry& motifs, const SamplerConfig& cfg,
                              const QuartetOptions& opts, Accept accept) {
  for (int attempt = 0; attempt < kProgramAttempts; ++attempt) {
    Seed program_seed = derive_seed(seed, purpose, static_cast<std::uint64_t>(retry * kProgramAttempts + attempt));
    Program z = sample_program(style, program_seed, motifs, cfg);
    if (!is_compatible(z, e)) continue;
    std::size_t fragments;
    try {
      fragments = fragment_count(z, seed);
    } catch (const Error&) {
      continue;
    }
    if (!accept(z, fragments)) continue;
    if (auto side = edited_side(z, e, seed, motifs, opts)) return side;
  }
  return std::nullopt;
}

}  // namespace

Quartet make_quartet(Seed seed, StyleTag style, const MotifRegistry& motifs, const SamplerConfig& cfg,
                     const QuartetOptions& opts) {
  for (int retry = 0; retry < kEditRetries; ++retry) {
    EditDescriptor e = sample_edit(derive_seed(seed, "quartet-edit", static_cast<std::uint64_t>(retry)), style, motifs, cfg);
    // A is simple: one layer and at most 16 fragments.
    auto a = find_side(seed, "quartet-a", retry, style, e, motifs, cfg, opts,
                       [](const Program& z, std::size_t n) { return z.layers.size() == 1 && n <= 16; });
    if (!a) continue;
    auto b = find_side(seed, "quartet-b", retry, style, e, motifs, cfg, opts,
                       [&](const Program& z, std::size_t n) { return n >= a->fragments && !(z == a->before); });
    if (!b) continue;
    Quartet q;
    q.seed = seed;
    q.style = style;
    q.edit = std::move(e);
    q.a = std::move(a->before);
    q.a_prime = std::move(a->after);
    q.b = std::move(b->before);
    q.b_prime = std::move(b->after);
    q.image_a = std::move(a->image_before);
    q.image_a_prime = std::move(a->image_after);
    q.image_b = std::move(b->image_before);
    q.image_b_prime = std::move(b->image_after);
    return q;
  }
  throw Error(ErrorCode::sampling_exhausted, "no compatible quartet after " + std::to_string(kEditRetries) +
                                                 " edit samples (seed " + std::to_string(seed) + ")");
}

Quartet assemble_quartet(const Program& a, const EditDescriptor& e, const Program& b, Seed seed,
                         const MotifRegistry& motifs, const QuartetOptions& opts) {
  Quartet q;
  q.seed = seed;
  q.style = a.style_tag;
  q.edit = e;
  q.a = a;
  q.b = b;
  try {
    q.a_prime = apply_edit(a, e);
  } catch (const Error& err) {
    throw Error(err.code(), std::string("a: ") + err.what(), err.node_path());
  }
  try {
    q.b_prime = apply_edit(b, e);
  } catch (const Error& err) {
    throw Error(err.code(), std::string("b: ") + err.what(), err.node_path());
  }
  RenderOptions r = render_options(opts);
  q.image_a = render(q.a, seed, r, motifs);
  q.image_a_prime = render(q.a_prime, seed, r, motifs);
  q.image_b = render(q.b, seed, r, motifs);
  q.image_b_prime = render(q.b_prime, seed, r, motifs);
  return q;
}

// ---------------------------------------------------------------------------
// Datasets.

std::string quartet_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "q%07zu", index);
  return buf;
}

Seed quartet_seed(Seed master, std::size_t index) { return derive_seed(master, "quartet", index); }

std::string split_for(const std::string& id) { return hash_string(id) % 100 < 5 ? "val" : "train"; }

std::string manifest_line(const ManifestRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["seed"] = r.seed;
  j["style"] = std::string(style_tag_name(r.style));
  j["edit"] = r.edit;
  j["a"] = r.a;
  j["a_prime"] = r.a_prime;
  j["b"] = r.b;
  j["b_prime"] = r.b_prime;
  j["split"] = r.split;
  return j.dump();
}

ManifestRecord parse_manifest_line(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    ManifestRecord r;
    r.id = j.at("id").get<std::string>();
    r.seed = j.at("seed").get<Seed>();
    auto style = parse_style_tag(j.at("style").get<std::string>());
    if (!style) throw Error(ErrorCode::parse, "manifest record has an unknown style");
    r.style = *style;
    r.edit = j.at("edit").get<std::string>();
    r.a = j.at("a").get<std::string>();
    r.a_prime = j.at("a_prime").get<std::string>();
    r.b = j.at("b").get<std::string>();
    r.b_prime = j.at("b_prime").get<std::string>();
    r.split = j.at("split").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed manifest record: ") + e.what());
  }
}

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
}

void write_png(const fs::path& path, const std::optional<std::vector<std::uint8_t>>& png) {
  if (!png) return;
  write_file(path, std::string_view(reinterpret_cast<const char*>(png->data()), png->size()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ManifestRecord write_quartet(const Quartet& q, const std::string& id, const fs::path& root, const fs::path& rel) {
  fs::path dir = root / rel;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  struct Item {
    const char* name;
    const Program& program;
    const PatternImage& image;
  };
  const Item items[] = {{"a", q.a, q.image_a},
                        {"a_prime", q.a_prime, q.image_a_prime},
                        {"b", q.b, q.image_b},
                        {"b_prime", q.b_prime, q.image_b_prime}};
  for (const Item& it : items) {
    write_file(dir / (std::string(it.name) + ".svg"), it.image.svg);
    write_file(dir / (std::string(it.name) + ".sw"), print(it.program));
    write_png(dir / (std::string(it.name) + ".png"), it.image.raster);
  }
  ManifestRecord r;
  r.id = id;
  r.seed = q.seed;
  r.style = q.style;
  r.edit = print_edit(q.edit);
  auto svg = [&](const char* name) { return (rel / (std::string(name) + ".svg")).generic_string(); };
  r.a = svg("a");
  r.a_prime = svg("a_prime");
  r.b = svg("b");
  r.b_prime = svg("b_prime");
  r.split = split_for(id);
  return r;
}

}  // namespace

DatasetManifest write_dataset(const DatasetOptions& opts, const MotifRegistry& motifs, const SamplerConfig& cfg) {
  if (opts.count < 1) throw Error(ErrorCode::range, "dataset count must be at least 1");
  if (opts.styles.empty()) throw Error(ErrorCode::range, "dataset needs at least one style");
  const fs::path root = opts.out_dir;
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + root.string() + ": " + ec.message());

  std::vector<std::optional<ManifestRecord>> records(opts.count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::optional<Error> first_error;
  std::size_t done = 0;
  QuartetOptions qopts;
  qopts.raster_size = opts.raster_size;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= opts.count || failed) return;
      try {
        StyleTag style = opts.styles[i % opts.styles.size()];
        Quartet q = make_quartet(quartet_seed(opts.master_seed, i), style, motifs, cfg, qopts);
        std::string id = quartet_id(i);
        records[i] = write_quartet(q, id, root, fs::path(std::string(style_tag_name(style))) / id);
        std::lock_guard lock(mu);
        ++done;
        if (opts.progress) opts.progress(done, opts.count);
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = e;
        failed = true;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = Error(ErrorCode::io, e.what());
        failed = true;
      }
    }
  };

  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  auto cleanup = [&] {
    for (std::size_t i = 0; i < opts.count; ++i) {
      fs::path dir = root / std::string(style_tag_name(opts.styles[i % opts.styles.size()])) / quartet_id(i);
      fs::remove_all(dir, ec);
    }
    for (StyleTag style : opts.styles) fs::remove(root / std::string(style_tag_name(style)), ec);  // only if empty
    fs::remove(root / "manifest.jsonl.tmp", ec);
  };

  if (failed) {
    cleanup();
    throw *first_error;
  }

  DatasetManifest manifest;
  manifest.path = root / "manifest.jsonl";
  std::string text;
  for (auto& r : records) {
    text += manifest_line(*r) + "\n";
    manifest.records.push_back(std::move(*r));
  }
  try {
    write_file(root / "manifest.jsonl.tmp", text);
    fs::rename(root / "manifest.jsonl.tmp", manifest.path);
  } catch (const std::exception& e) {
    cleanup();
    throw Error(ErrorCode::io, std::string("cannot write manifest: ") + e.what());
  }
  return manifest;
}

std::vector<std::string> audit_dataset(const fs::path& dir) {
  std::vector<std::string> problems;
  std::string text;
  try {
    text = read_file(dir / "manifest.jsonl");
  } catch (const Error& e) {
    return {e.what()};
  }
  std::istringstream lines(text);
  std::string line, prev_id;
  std::set<std::string> ids;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const std::string at = "line " + std::to_string(lineno) + ": ";
    ManifestRecord r;
    try {
      r = parse_manifest_line(line);
    } catch (const Error& e) {
      problems.push_back(at + e.what());
      continue;
    }
    if (!ids.insert(r.id).second) problems.push_back(at + "duplicate id " + r.id);
    if (!prev_id.empty() && r.id <= prev_id) problems.push_back(at + "ids not sorted at " + r.id);
    prev_id = r.id;
    if (r.split != split_for(r.id)) problems.push_back(at + "split does not follow the hash rule");
    const std::string style_dir = std::string(style_tag_name(r.style)) + "/";
    std::map<std::string, std::string> svgs;
    std::map<std::string, Program> programs;
    for (const auto& [name, rel] : {std::pair{"a", r.a}, {"a_prime", r.a_prime}, {"b", r.b}, {"b_prime", r.b_prime}}) {
      if (rel.rfind(style_dir, 0) != 0) problems.push_back(at + name + " is outside the " + style_dir + " directory");
      fs::path svg = dir / rel;
      fs::path sw = fs::path(svg).replace_extension(".sw");
      try {
        svgs[name] = read_file(svg);
        programs[name] = parse(read_file(sw));
      } catch (const Error& e) {
        problems.push_back(at + e.what());
      }
    }
    if (programs.size() != 4 || svgs.size() != 4) continue;
    try {
      EditDescriptor e = parse_edit(r.edit);
      if (!(apply_edit(programs["a"], e) == programs["a_prime"])) problems.push_back(at + "a_prime != edit(a)");
      if (!(apply_edit(programs["b"], e) == programs["b_prime"])) problems.push_back(at + "b_prime != edit(b)");
    } catch (const Error& e) {
      problems.push_back(at + e.what());
    }
    if (svgs["a"] == svgs["a_prime"]) problems.push_back(at + "a and a_prime render identically");
    if (svgs["b"] == svgs["b_prime"]) problems.push_back(at + "b and b_prime render identically");
  }
  if (lineno == 0) problems.push_back("manifest is empty");
  return problems;
}

}  // namespace splitweave
