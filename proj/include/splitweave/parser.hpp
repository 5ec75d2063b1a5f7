#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "splitweave/ast.hpp"

namespace splitweave {

// Parses surface syntax and validates the result. Throws ParseError on
// malformed text and SemanticError when the tree fails validate().
Program parse(std::string_view text);
// Syntax only; the caller is responsible for validation.
Program parse_unchecked(std::string_view text);

// Canonical text: 2-space indentation, one node per line, keywords in table
// order, canonical decimals, uppercase hex colors, LF line endings.
std::string print(const Program& p);

std::string print_value(const Value& v);
std::string print_node(const Node& n);
// Layer form with child nodes on their own lines, each prefixed by `indent`
// plus two spaces; the closing line carries the opacity keyword.
std::string print_layer(const Layer& layer, std::string_view indent);

namespace syntax {

/// Generic parenthesized form produced by the reader.
struct Sx {
  enum class Kind { list, number, string, ident, keyword };
  Kind kind = Kind::list;
  std::string text;  // atom text; strings are unescaped
  std::vector<Sx> items;
  SourceSpan span;

  bool is_list() const { return kind == Kind::list; }
  // Head identifier of a list form, empty otherwise.
  std::string_view head() const;
};

// Reads exactly one form; trailing non-comment text is an error.
Sx read(std::string_view text);

Program build_program(const Sx& form);
Layer build_layer(const Sx& form);
Node build_node(const Sx& form);
Value build_value(const Sx& form);

/// Keyword/value pairs that follow a list head.
struct KeywordArgs {
  std::vector<std::pair<const Sx*, const Sx*>> pairs;  // keyword form, value form
  const Sx* find(std::string_view name) const;
};

// Splits items[first..] of `form` into keyword arguments, rejecting
// duplicates and keywords outside `allowed`.
KeywordArgs keyword_args(const Sx& form, std::size_t first, const std::vector<std::string_view>& allowed);

[[noreturn]] void fail(const Sx& at, const std::string& message, std::vector<std::string> expected = {});

}  // namespace syntax

}  // namespace splitweave
