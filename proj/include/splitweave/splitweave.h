/* SplitWeave C API.
 *
 * Every handle is opaque and owned by the caller; release it with the
 * matching *_free function. Strings and byte buffers returned through out
 * parameters are heap-allocated: release them with sw_string_free /
 * sw_bytes_free. Functions that can fail return an sw_status and, when
 * `err` is non-null, store a detailed error that must be released with
 * sw_error_free. */
#ifndef SPLITWEAVE_H
#define SPLITWEAVE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SW_API __declspec(dllexport)
#else
#define SW_API __attribute__((visibility("default")))
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_ERR_INVALID_ARGUMENT = 1,
  SW_ERR_PARSE = 2,
  SW_ERR_SEMANTIC = 3,
  SW_ERR_INCOMPATIBLE_EDIT = 4,
  SW_ERR_INVALID_RESULT = 5,
  SW_ERR_STRUCTURE_MISMATCH = 6,
  SW_ERR_GEOMETRY = 7, /* degenerate sites, unsupported merge topology */
  SW_ERR_SAMPLING_EXHAUSTED = 8,
  SW_ERR_MOTIF = 9, /* malformed motif file or unknown motif id */
  SW_ERR_IO = 10,
  SW_ERR_BUDGET = 11,
  SW_ERR_INTERNAL = 12
} sw_status;

typedef struct sw_context sw_context;
typedef struct sw_program sw_program;
typedef struct sw_edit sw_edit;
typedef struct sw_error sw_error;

/* Errors. */
SW_API sw_status sw_error_status(const sw_error* err);
SW_API const char* sw_error_message(const sw_error* err);
/* Node path of the offending subtree; empty when not applicable. */
SW_API const char* sw_error_node_path(const sw_error* err);
/* Source span of a parse error; returns 0 when the error has none. */
SW_API int sw_error_span(const sw_error* err, int* start_line, int* start_col, int* end_line, int* end_col);
/* Number of semantic diagnostics and their "path: message" lines. */
SW_API size_t sw_error_diagnostic_count(const sw_error* err);
SW_API const char* sw_error_diagnostic(const sw_error* err, size_t index);
SW_API void sw_error_free(sw_error* err);

SW_API void sw_string_free(char* s);
SW_API void sw_bytes_free(uint8_t* bytes);

/* Context: motif registry plus sampler configuration. Either path may be
 * null or empty for the defaults (builtin motifs, builtin tables). */
SW_API sw_status sw_context_new(const char* motif_dir, const char* config_path, sw_context** out, sw_error** err);
SW_API void sw_context_free(sw_context* ctx);
/* JSON array of {"id", "source"} sorted by id. */
SW_API sw_status sw_motifs_json(const sw_context* ctx, char** out);

/* Programs. */
SW_API sw_status sw_program_parse(const char* text, sw_program** out, sw_error** err);
SW_API sw_status sw_program_print(const sw_program* p, char** out);
/* Writes one "path: message" line per diagnostic (empty when valid) and
 * returns the diagnostic count through `count`. */
SW_API sw_status sw_program_validate_text(const char* text, char** report, size_t* count, sw_error** err);
SW_API int sw_program_equal(const sw_program* a, const sw_program* b);
SW_API void sw_program_free(sw_program* p);

/* Samplers: style is "mtp" or "sfp". */
SW_API sw_status sw_sample(const sw_context* ctx, const char* style, uint64_t seed, sw_program** out, sw_error** err);

/* Edits. */
SW_API sw_status sw_edit_parse(const char* text, sw_edit** out, sw_error** err);
SW_API sw_status sw_edit_print(const sw_edit* e, char** out);
SW_API int sw_edit_is_compatible(const sw_program* p, const sw_edit* e);
SW_API sw_status sw_edit_apply(const sw_program* p, const sw_edit* e, sw_program** out, sw_error** err);
SW_API void sw_edit_free(sw_edit* e);

/* Rendering. `precision` <= 0 selects the default of 3 decimals. The
 * warnings string holds one "path: message" line per dropped fragment and
 * may be null when not wanted. */
SW_API sw_status sw_render_svg(const sw_context* ctx, const sw_program* p, uint64_t seed, int precision, char** svg,
                               char** warnings, sw_error** err);
SW_API sw_status sw_render_png(const sw_context* ctx, const sw_program* p, uint64_t seed, int size, uint8_t** png,
                               size_t* len, sw_error** err);

/* Interpolates two structurally identical programs at t in [0, 1]. */
SW_API sw_status sw_interpolate(const sw_program* p, const sw_program* q, double t, sw_program** out, sw_error** err);

/* Datasets. */
typedef void (*sw_progress_fn)(size_t done, size_t total, void* user);

typedef struct sw_dataset_options {
  size_t count;
  const char* styles; /* comma-separated, e.g. "mtp,sfp" */
  uint64_t seed;
  const char* out_dir;
  unsigned jobs;
  int png_size; /* 0 disables raster output */
  sw_progress_fn progress;
  void* progress_user;
} sw_dataset_options;

SW_API sw_status sw_dataset_write(const sw_context* ctx, const sw_dataset_options* opts, char** manifest_path,
                                  sw_error** err);
/* One line per problem; `problems` receives the count. */
SW_API sw_status sw_dataset_audit(const char* dir, char** report, size_t* problems, sw_error** err);

/* Serves the HTTP API until the process is interrupted. */
SW_API sw_status sw_serve(const sw_context* ctx, const char* host, int port, const char* static_dir, sw_error** err);

#ifdef __cplusplus
}
#endif

#endif /* SPLITWEAVE_H */
