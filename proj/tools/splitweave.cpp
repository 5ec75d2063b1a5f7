// splitweave: command-line front end over the C API.
//
// Exit codes: 0 success, 1 usage error, 2 parse/semantic error,
// 3 runtime error (geometry, sampling, io, incompatible edit).

#include <splitweave/splitweave.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kSyntax = 2, kRuntime = 3 };

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Context = std::unique_ptr<sw_context, Deleter<sw_context, sw_context_free>>;
using ProgramPtr = std::unique_ptr<sw_program, Deleter<sw_program, sw_program_free>>;
using EditPtr = std::unique_ptr<sw_edit, Deleter<sw_edit, sw_edit_free>>;
using ErrorPtr = std::unique_ptr<sw_error, Deleter<sw_error, sw_error_free>>;

// Takes ownership of a C string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  sw_string_free(s);
  return out;
}

// Raised inside a command to unwind with an exit code; the message has
// already been printed.
struct Failure {
  int code;
};

int exit_for(sw_status status) {
  switch (status) {
    case SW_OK: return kOk;
    case SW_ERR_INVALID_ARGUMENT: return kUsage;
    case SW_ERR_PARSE:
    case SW_ERR_SEMANTIC: return kSyntax;
    default: return kRuntime;
  }
}

[[noreturn]] void report(sw_status status, sw_error* raw, const std::string& where) {
  ErrorPtr err(raw);
  std::string prefix = where.empty() ? "error" : where;
  int sl, sc, el, ec;
  if (err && sw_error_span(err.get(), &sl, &sc, &el, &ec))
    prefix += ":" + std::to_string(sl) + ":" + std::to_string(sc) + "-" + std::to_string(el) + ":" + std::to_string(ec);
  std::cerr << prefix << ": " << (err ? sw_error_message(err.get()) : "unknown failure") << "\n";
  if (err) {
    size_t n = sw_error_diagnostic_count(err.get());
    for (size_t i = 0; i < n; ++i) std::cerr << "  " << sw_error_diagnostic(err.get(), i) << "\n";
    if (n == 0 && *sw_error_node_path(err.get())) std::cerr << "  at " << sw_error_node_path(err.get()) << "\n";
  }
  throw Failure{exit_for(status)};
}

// `err` is read after the call has filled it.
void check(sw_status status, sw_error** err, const std::string& where = {}) {
  if (status != SW_OK) report(status, err ? *err : nullptr, where);
}

[[noreturn]] void usage(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  throw Failure{kUsage};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw Failure{kRuntime};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const void* data, size_t size) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    throw Failure{kRuntime};
  }
}

void write_text(const fs::path& path, const std::string& text) { write_file(path, text.data(), text.size()); }

// Writes to the file, or standard output when no path is given.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text(path, text);
}

ProgramPtr load_program(const std::string& path) {
  std::string text = read_file(path);
  sw_program* p = nullptr;
  sw_error* err = nullptr;
  check(sw_program_parse(text.c_str(), &p, &err), &err, path);
  return ProgramPtr(p);
}

std::string program_text(const sw_program* p) {
  char* s = nullptr;
  check(sw_program_print(p, &s), nullptr);
  return take(s);
}

std::string render_svg(const sw_context* ctx, const sw_program* p, uint64_t seed) {
  char* svg = nullptr;
  char* warnings = nullptr;
  sw_error* err = nullptr;
  check(sw_render_svg(ctx, p, seed, 0, &svg, &warnings, &err), &err);
  std::string w = take(warnings);
  if (!w.empty()) std::cerr << w;
  return take(svg);
}

void render_png(const sw_context* ctx, const sw_program* p, uint64_t seed, int size, const fs::path& path) {
  uint8_t* bytes = nullptr;
  size_t len = 0;
  sw_error* err = nullptr;
  check(sw_render_png(ctx, p, seed, size, &bytes, &len, &err), &err);
  std::unique_ptr<uint8_t, Deleter<uint8_t, sw_bytes_free>> owned(bytes);
  write_file(path, bytes, len);
}

bool known_styles(const std::string& csv) {
  std::stringstream list(csv);
  std::string item;
  bool any = false;
  while (std::getline(list, item, ',')) {
    if (item != "mtp" && item != "sfp") return false;
    any = true;
  }
  return any;
}

struct Globals {
  std::string motif_dir;
  std::string config;

  Context context() const {
    sw_context* ctx = nullptr;
    sw_error* err = nullptr;
    check(sw_context_new(motif_dir.c_str(), config.c_str(), &ctx, &err), &err);
    return Context(ctx);
  }
};

void progress(size_t done, size_t total, void*) {
  size_t step = total >= 100 ? total / 100 : 1;
  if (done % step == 0 || done == total) {
    std::fprintf(stderr, "\rquartets %zu/%zu", done, total);
    if (done == total) std::fputc('\n', stderr);
    std::fflush(stderr);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SplitWeave pattern language toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  if (const char* env = std::getenv("SPLITWEAVE_MOTIF_DIR")) g.motif_dir = env;
  app.add_option("--motif-dir", g.motif_dir, "Directory of user motif SVGs (default $SPLITWEAVE_MOTIF_DIR)");
  app.add_option("--config", g.config, "Sampler configuration JSON");

  int code = kOk;

  // render
  std::string render_in, render_out;
  uint64_t render_seed = 0;
  int render_png_size = 0;
  auto* render = app.add_subcommand("render", "Render a program to SVG (and PNG)");
  render->add_option("program", render_in, "Program file")->required();
  render->add_option("--seed", render_seed, "Render seed");
  render->add_option("--out", render_out, "Output SVG path (default stdout)");
  render->add_option("--png", render_png_size, "Also write a PNG of this width")->check(CLI::Range(1, 8192));
  render->callback([&] {
    if (render_png_size > 0 && (render_out.empty() || render_out == "-")) usage("--png needs --out");
    Context ctx = g.context();
    ProgramPtr p = load_program(render_in);
    emit(render_out, render_svg(ctx.get(), p.get(), render_seed));
    if (render_png_size > 0)
      render_png(ctx.get(), p.get(), render_seed, render_png_size, fs::path(render_out).replace_extension(".png"));
  });

  // sample
  std::string sample_style, sample_out;
  uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "Sample a program from a style sampler");
  sample->add_option("--style", sample_style, "mtp or sfp")->required();
  sample->add_option("--seed", sample_seed, "Sampler seed");
  sample->add_option("--out", sample_out, "Output .sw path (default stdout)");
  sample->callback([&] {
    Context ctx = g.context();
    sw_program* p = nullptr;
    sw_error* err = nullptr;
    check(sw_sample(ctx.get(), sample_style.c_str(), sample_seed, &p, &err), &err);
    ProgramPtr owned(p);
    emit(sample_out, program_text(p));
  });

  // edit
  std::string edit_in, edit_path, edit_out;
  auto* edit = app.add_subcommand("edit", "Apply a serialized edit to a program");
  edit->add_option("program", edit_in, "Program file")->required();
  edit->add_option("--edit", edit_path, "Edit descriptor file")->required();
  edit->add_option("--out", edit_out, "Output .sw path (default stdout)");
  edit->callback([&] {
    ProgramPtr p = load_program(edit_in);
    std::string text = read_file(edit_path);
    sw_edit* e = nullptr;
    sw_error* err = nullptr;
    check(sw_edit_parse(text.c_str(), &e, &err), &err, edit_path);
    EditPtr owned(e);
    sw_program* out = nullptr;
    check(sw_edit_apply(p.get(), e, &out, &err), &err);
    ProgramPtr result(out);
    emit(edit_out, program_text(out));
  });

  // dataset
  size_t ds_count = 0;
  std::string ds_styles = "mtp,sfp", ds_out;
  uint64_t ds_seed = 0;
  unsigned ds_jobs = 1;
  int ds_png = 0;
  auto* dataset = app.add_subcommand("dataset", "Generate an analogical quartet dataset");
  dataset->add_option("--count", ds_count, "Number of quartets")->required()->check(CLI::PositiveNumber);
  dataset->add_option("--styles", ds_styles, "Comma-separated styles");
  dataset->add_option("--seed", ds_seed, "Master seed");
  dataset->add_option("--out", ds_out, "Output directory")->required();
  dataset->add_option("--jobs", ds_jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  dataset->add_option("--png", ds_png, "Also write PNGs of this width")->check(CLI::Range(1, 8192));
  dataset->callback([&] {
    if (!known_styles(ds_styles)) usage("unknown style in '" + ds_styles + "' (expected mtp, sfp)");
    Context ctx = g.context();
    sw_dataset_options opts{};
    opts.count = ds_count;
    opts.styles = ds_styles.c_str();
    opts.seed = ds_seed;
    opts.out_dir = ds_out.c_str();
    opts.jobs = ds_jobs;
    opts.png_size = ds_png;
    opts.progress = progress;
    char* manifest = nullptr;
    sw_error* err = nullptr;
    check(sw_dataset_write(ctx.get(), &opts, &manifest, &err), &err);
    std::cout << take(manifest) << "\n";
  });

  // animate
  std::string anim_a, anim_b, anim_out;
  int anim_frames = 2;
  uint64_t anim_seed = 0;
  auto* animate = app.add_subcommand("animate", "Interpolate between two programs");
  animate->add_option("progA", anim_a, "Start program")->required();
  animate->add_option("progB", anim_b, "End program")->required();
  animate->add_option("--frames", anim_frames, "Frame count (>= 2)")->check(CLI::Range(2, 100000));
  animate->add_option("--seed", anim_seed, "Render seed");
  animate->add_option("--out", anim_out, "Output directory")->required();
  animate->callback([&] {
    Context ctx = g.context();
    ProgramPtr a = load_program(anim_a);
    ProgramPtr b = load_program(anim_b);
    for (int i = 0; i < anim_frames; ++i) {
      double t = static_cast<double>(i) / (anim_frames - 1);
      sw_program* f = nullptr;
      sw_error* err = nullptr;
      check(sw_interpolate(a.get(), b.get(), t, &f, &err), &err);
      ProgramPtr frame(f);
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04d", i);
      fs::path base = fs::path(anim_out) / name;
      write_text(fs::path(base).replace_extension(".sw"), program_text(f));
      write_text(fs::path(base).replace_extension(".svg"), render_svg(ctx.get(), f, anim_seed));
    }
  });

  // validate
  std::string validate_in;
  auto* validate = app.add_subcommand("validate", "Check a program and list diagnostics");
  validate->add_option("program", validate_in, "Program file")->required();
  validate->callback([&] {
    std::string text = read_file(validate_in);
    char* report_text = nullptr;
    size_t count = 0;
    sw_error* err = nullptr;
    check(sw_program_validate_text(text.c_str(), &report_text, &count, &err), &err, validate_in);
    std::string lines = take(report_text);
    std::cerr << lines;
    if (count > 0) code = kSyntax;
  });

  // fmt
  std::string fmt_in;
  auto* fmt = app.add_subcommand("fmt", "Rewrite a program in canonical form");
  fmt->add_option("program", fmt_in, "Program file")->required();
  fmt->callback([&] {
    std::string before = read_file(fmt_in);
    ProgramPtr p = load_program(fmt_in);
    std::string after = program_text(p.get());
    if (after != before) write_text(fmt_in, after);
  });

  // serve
  std::string serve_host = "127.0.0.1", serve_static;
  int serve_port = 8787;
  auto* serve = app.add_subcommand("serve", "Run the playground HTTP server");
  serve->add_option("--host", serve_host, "Listen address");
  serve->add_option("--port", serve_port, "Listen port")->check(CLI::Range(0, 65535));
  serve->add_option("--static", serve_static, "Directory of playground assets served at /");
  serve->callback([&] {
    Context ctx = g.context();
    sw_error* err = nullptr;
    check(sw_serve(ctx.get(), serve_host.c_str(), serve_port, serve_static.c_str(), &err), &err);
  });

  // audit
  std::string audit_dir;
  auto* audit = app.add_subcommand("audit", "Verify a generated dataset");
  audit->add_option("dir", audit_dir, "Dataset directory")->required();
  audit->callback([&] {
    char* report_text = nullptr;
    size_t problems = 0;
    sw_error* err = nullptr;
    check(sw_dataset_audit(audit_dir.c_str(), &report_text, &problems, &err), &err);
    std::cout << take(report_text);
    if (problems > 0) {
      std::cerr << problems << " problem(s)\n";
      code = kRuntime;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const Failure& f) {
    return f.code;
  }
  return code;
}
