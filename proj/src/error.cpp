#include "splitweave/error.hpp"

namespace splitweave {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::semantic: return "SemanticError";
    case ErrorCode::path_not_found: return "PathNotFound";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::range: return "RangeError";
    case ErrorCode::degenerate_sites: return "DegenerateSites";
    case ErrorCode::unsupported_topology: return "UnsupportedTopology";
    case ErrorCode::field_type: return "FieldTypeError";
    case ErrorCode::axis_unavailable: return "AxisUnavailable";
    case ErrorCode::structure_mismatch: return "StructureMismatch";
    case ErrorCode::incompatible_edit: return "IncompatibleEdit";
    case ErrorCode::invalid_result: return "InvalidResult";
    case ErrorCode::sampling_exhausted: return "SamplingExhausted";
    case ErrorCode::io: return "IoError";
    case ErrorCode::motif_parse: return "MotifParseError";
    case ErrorCode::unknown_motif: return "UnknownMotif";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
  }
  return "Error";
}

namespace {
std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  if (diagnostics.empty()) return "program failed validation";
  std::string out = diagnostics.front().path + ": " + diagnostics.front().message;
  if (diagnostics.size() > 1) out += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
  return out;
}
}  // namespace

SemanticError::SemanticError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorCode::semantic, summarize(diagnostics), diagnostics.empty() ? std::string{} : diagnostics.front().path),
      diagnostics_(std::move(diagnostics)) {}

}  // namespace splitweave
