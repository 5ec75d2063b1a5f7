#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace splitweave {

enum class ErrorCode {
  parse,
  semantic,
  path_not_found,
  kind_mismatch,
  range,
  degenerate_sites,
  unsupported_topology,
  field_type,
  axis_unavailable,
  structure_mismatch,
  incompatible_edit,
  invalid_result,
  sampling_exhausted,
  io,
  motif_parse,
  unknown_motif,
  budget_exceeded,
};

const char* error_code_name(ErrorCode code);

/// 1-based line/column range inside a source text.
struct SourceSpan {
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;

  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  std::string path;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string node_path = {})
      : std::runtime_error(message), code_(code), node_path_(std::move(node_path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& node_path() const noexcept { return node_path_; }

  // Rethrown with the offending node attached when an error escapes interpretation.
  Error with_path(std::string path) const {
    Error copy = *this;
    if (copy.node_path_.empty()) copy.node_path_ = std::move(path);
    return copy;
  }

 private:
  ErrorCode code_;
  std::string node_path_;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message, std::vector<std::string> expected = {})
      : Error(ErrorCode::parse, message), span_(span), expected_(std::move(expected)) {}

  const SourceSpan& span() const noexcept { return span_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

class SemanticError : public Error {
 public:
  explicit SemanticError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace splitweave
