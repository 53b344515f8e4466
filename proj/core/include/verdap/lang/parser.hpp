#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "verdap/lang/ast.hpp"

namespace verdap::lang {

struct Diagnostic {
  enum class Kind { Syntax, Type, Resolution };

  Kind kind;
  SourceLoc loc;
  std::string message;
  /// Populated for syntax errors.
  std::vector<std::string> expected;
};

std::string to_string(const Diagnostic& d);
const char* kind_name(Diagnostic::Kind kind);

struct ParseResult {
  std::optional<TranslationUnit> unit;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return unit.has_value(); }
};

/// Parses and type-checks a MiniVer translation unit. Deterministic.
ParseResult parse_program(std::string_view source, const std::string& file);

/// Lookup of the sort of a program variable visible at some point, or
/// nullopt when it is not in scope.
using SortEnv = std::function<std::optional<Sort>(const std::string&)>;

struct ExprParseResult {
  std::optional<Expr> expr;
  std::vector<Diagnostic> diagnostics;
};

/// Parses and type-checks a standalone expression against `env`.
ExprParseResult parse_expression(std::string_view text, const SortEnv& env);

/// Pretty-prints a unit back to MiniVer source that reparses to a
/// structurally identical unit.
std::string pretty_print(const TranslationUnit& unit);
std::string pretty_print(const StmtList& body, int indent = 0);

} // namespace verdap::lang
