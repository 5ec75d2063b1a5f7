#include "splitweave/splitweave.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "splitweave/edits.hpp"
#include "splitweave/parser.hpp"
#include "splitweave/server.hpp"

using namespace splitweave;

struct sw_context {
  MotifRegistry motifs;
  SamplerConfig config;
};

struct sw_program {
  Program program;
};

struct sw_edit {
  EditDescriptor edit;
};

struct sw_error {
  sw_status status = SW_ERR_INTERNAL;
  std::string message;
  std::string node_path;
  std::optional<SourceSpan> span;
  std::vector<std::string> diagnostics;
};

namespace {

sw_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return SW_ERR_PARSE;
    case ErrorCode::semantic:
    case ErrorCode::path_not_found:
    case ErrorCode::kind_mismatch:
    case ErrorCode::range:
    case ErrorCode::field_type:
    case ErrorCode::axis_unavailable: return SW_ERR_SEMANTIC;
    case ErrorCode::incompatible_edit: return SW_ERR_INCOMPATIBLE_EDIT;
    case ErrorCode::invalid_result: return SW_ERR_INVALID_RESULT;
    case ErrorCode::structure_mismatch: return SW_ERR_STRUCTURE_MISMATCH;
    case ErrorCode::degenerate_sites:
    case ErrorCode::unsupported_topology: return SW_ERR_GEOMETRY;
    case ErrorCode::sampling_exhausted: return SW_ERR_SAMPLING_EXHAUSTED;
    case ErrorCode::motif_parse:
    case ErrorCode::unknown_motif: return SW_ERR_MOTIF;
    case ErrorCode::io: return SW_ERR_IO;
    case ErrorCode::budget_exceeded: return SW_ERR_BUDGET;
  }
  return SW_ERR_INTERNAL;
}

sw_status fail(sw_error** err, sw_status status, std::string message) {
  if (err) {
    *err = new sw_error;
    (*err)->status = status;
    (*err)->message = std::move(message);
  }
  return status;
}

sw_status fail(sw_error** err, const Error& e) {
  sw_status status = status_for(e.code());
  if (!err) return status;
  auto* out = new sw_error;
  out->status = status;
  out->message = e.what();
  out->node_path = e.node_path();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) out->span = pe->span();
  if (const auto* se = dynamic_cast<const SemanticError*>(&e)) {
    for (const Diagnostic& d : se->diagnostics()) out->diagnostics.push_back(d.path + ": " + d.message);
    if (!se->diagnostics().empty()) out->node_path = se->diagnostics().front().path;
  }
  *err = out;
  return status;
}

// Runs `body`, translating exceptions into a status and error object.
template <typename F>
sw_status guarded(sw_error** err, F&& body) {
  if (err) *err = nullptr;
  try {
    body();
    return SW_OK;
  } catch (const Error& e) {
    return fail(err, e);
  } catch (const std::bad_alloc&) {
    return fail(err, SW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(err, SW_ERR_INTERNAL, e.what());
  }
}

char* dup_string(std::string_view s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

bool present(const char* s) { return s && *s; }

StyleTag style_or_throw(std::string_view name) {
  auto tag = parse_style_tag(name);
  if (!tag || *tag == StyleTag::custom) throw Error(ErrorCode::range, "unknown style '" + std::string(name) + "'");
  return *tag;
}

std::string diagnostic_lines(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const Diagnostic& d : diags) out += d.path + ": " + d.message + "\n";
  return out;
}

}  // namespace

extern "C" {

sw_status sw_error_status(const sw_error* err) { return err ? err->status : SW_OK; }
const char* sw_error_message(const sw_error* err) { return err ? err->message.c_str() : ""; }
const char* sw_error_node_path(const sw_error* err) { return err ? err->node_path.c_str() : ""; }

int sw_error_span(const sw_error* err, int* start_line, int* start_col, int* end_line, int* end_col) {
  if (!err || !err->span) return 0;
  if (start_line) *start_line = err->span->start_line;
  if (start_col) *start_col = err->span->start_col;
  if (end_line) *end_line = err->span->end_line;
  if (end_col) *end_col = err->span->end_col;
  return 1;
}

size_t sw_error_diagnostic_count(const sw_error* err) { return err ? err->diagnostics.size() : 0; }

const char* sw_error_diagnostic(const sw_error* err, size_t index) {
  return err && index < err->diagnostics.size() ? err->diagnostics[index].c_str() : "";
}

void sw_error_free(sw_error* err) { delete err; }
void sw_string_free(char* s) { std::free(s); }
void sw_bytes_free(uint8_t* bytes) { std::free(bytes); }

sw_status sw_context_new(const char* motif_dir, const char* config_path, sw_context** out, sw_error** err) {
  if (!out) return fail(err, SW_ERR_INVALID_ARGUMENT, "out is null");
  return guarded(err, [&] {
    auto ctx = std::make_unique<sw_context>();
    ctx->motifs = load_motif_library(present(motif_dir) ? std::filesystem::path(motif_dir) : std::filesystem::path());
    ctx->config = present(config_path) ? load_sampler_config(config_path) : default_sampler_config();
    *out = ctx.release();
  });
}

void sw_context_free(sw_context* ctx) { delete ctx; }

sw_status sw_motifs_json(const sw_context* ctx, char** out) {
  if (!ctx || !out) return SW_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, [&] {
    nlohmann::json list = nlohmann::json::array();
    for (const MotifDef& m : ctx->motifs.all())
      list.push_back({{"id", m.id}, {"source", m.source == MotifSource::builtin ? "builtin" : "userFile"}});
    *out = dup_string(list.dump());
  });
}

sw_status sw_program_parse(const char* text, sw_program** out, sw_error** err) {
  if (!text || !out) return fail(err, SW_ERR_INVALID_ARGUMENT, "text and out must be non-null");
  return guarded(err, [&] { *out = new sw_program{parse(text)}; });
}

sw_status sw_program_print(const sw_program* p, char** out) {
  if (!p || !out) return SW_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, [&] { *out = dup_string(print(p->program)); });
}

sw_status sw_program_validate_text(const char* text, char** report, size_t* count, sw_error** err) {
  if (!text || !report || !count) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  return guarded(err, [&] {
    auto diags = validate(parse_unchecked(text));
    *count = diags.size();
    *report = dup_string(diagnostic_lines(diags));
  });
}

int sw_program_equal(const sw_program* a, const sw_program* b) {
  return a && b && ast_equals(a->program, b->program) ? 1 : 0;
}

void sw_program_free(sw_program* p) { delete p; }

sw_status sw_sample(const sw_context* ctx, const char* style, uint64_t seed, sw_program** out, sw_error** err) {
  if (!ctx || !style || !out) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  auto tag = parse_style_tag(style);
  if (!tag || *tag == StyleTag::custom)
    return fail(err, SW_ERR_INVALID_ARGUMENT, "unknown style '" + std::string(style) + "' (expected mtp or sfp)");
  return guarded(err, [&] { *out = new sw_program{sample_program(*tag, seed, ctx->motifs, ctx->config)}; });
}

sw_status sw_edit_parse(const char* text, sw_edit** out, sw_error** err) {
  if (!text || !out) return fail(err, SW_ERR_INVALID_ARGUMENT, "text and out must be non-null");
  return guarded(err, [&] { *out = new sw_edit{parse_edit(text)}; });
}

sw_status sw_edit_print(const sw_edit* e, char** out) {
  if (!e || !out) return SW_ERR_INVALID_ARGUMENT;
  return guarded(nullptr, [&] { *out = dup_string(print_edit(e->edit)); });
}

int sw_edit_is_compatible(const sw_program* p, const sw_edit* e) {
  return p && e && is_compatible(p->program, e->edit) ? 1 : 0;
}

sw_status sw_edit_apply(const sw_program* p, const sw_edit* e, sw_program** out, sw_error** err) {
  if (!p || !e || !out) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  return guarded(err, [&] { *out = new sw_program{apply_edit(p->program, e->edit)}; });
}

void sw_edit_free(sw_edit* e) { delete e; }

sw_status sw_render_svg(const sw_context* ctx, const sw_program* p, uint64_t seed, int precision, char** svg,
                        char** warnings, sw_error** err) {
  if (!ctx || !p || !svg) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  return guarded(err, [&] {
    RenderOptions opts;
    if (precision > 0) opts.precision = precision;
    SceneGraph scene = interpret(p->program, seed, ctx->motifs);
    std::string text = emit_svg(scene, opts);
    char* w = warnings ? dup_string(diagnostic_lines(scene.warnings)) : nullptr;
    *svg = dup_string(text);
    if (warnings) *warnings = w;
  });
}

sw_status sw_render_png(const sw_context* ctx, const sw_program* p, uint64_t seed, int size, uint8_t** png,
                        size_t* len, sw_error** err) {
  if (!ctx || !p || !png || !len) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  return guarded(err, [&] {
    PngRasterizer raster;
    auto bytes = raster.rasterize(interpret(p->program, seed, ctx->motifs), size);
    auto* buf = static_cast<uint8_t*>(std::malloc(bytes.size()));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, bytes.data(), bytes.size());
    *png = buf;
    *len = bytes.size();
  });
}

sw_status sw_interpolate(const sw_program* p, const sw_program* q, double t, sw_program** out, sw_error** err) {
  if (!p || !q || !out) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  return guarded(err, [&] { *out = new sw_program{interpolate_programs(p->program, q->program, t)}; });
}

sw_status sw_dataset_write(const sw_context* ctx, const sw_dataset_options* opts, char** manifest_path,
                           sw_error** err) {
  if (!ctx || !opts || !present(opts->out_dir) || !manifest_path)
    return fail(err, SW_ERR_INVALID_ARGUMENT, "context, options, out_dir and manifest_path are required");
  return guarded(err, [&] {
    DatasetOptions d;
    d.count = opts->count;
    d.master_seed = opts->seed;
    d.out_dir = opts->out_dir;
    d.workers = opts->jobs;
    if (opts->png_size > 0) d.raster_size = opts->png_size;
    if (present(opts->styles)) {
      d.styles.clear();
      std::stringstream list(opts->styles);
      std::string item;
      while (std::getline(list, item, ',')) d.styles.push_back(style_or_throw(item));
    }
    if (opts->progress) {
      d.progress = [fn = opts->progress, user = opts->progress_user](std::size_t done, std::size_t total) {
        fn(done, total, user);
      };
    }
    DatasetManifest m = write_dataset(d, ctx->motifs, ctx->config);
    *manifest_path = dup_string(m.path.string());
  });
}

sw_status sw_dataset_audit(const char* dir, char** report, size_t* problems, sw_error** err) {
  if (!present(dir) || !report || !problems) return fail(err, SW_ERR_INVALID_ARGUMENT, "arguments must be non-null");
  return guarded(err, [&] {
    auto found = audit_dataset(dir);
    std::string text;
    for (const std::string& line : found) text += line + "\n";
    *problems = found.size();
    *report = dup_string(text);
  });
}

sw_status sw_serve(const sw_context* ctx, const char* host, int port, const char* static_dir, sw_error** err) {
  if (!ctx) return fail(err, SW_ERR_INVALID_ARGUMENT, "context is null");
  return guarded(err, [&] {
    Api api(ctx->motifs, ctx->config);
    ServerOptions opts;
    if (present(host)) opts.host = host;
    opts.port = port;
    if (present(static_dir)) opts.static_dir = static_dir;
    HttpServer server(api, opts);
    int bound = server.bind();
    std::cerr << "splitweave: serving on http://" << opts.host << ":" << bound << "\n";
    server.run();
  });
}

}  // extern "C"
