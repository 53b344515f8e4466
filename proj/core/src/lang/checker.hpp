#pragma once

#include <optional>
#include <vector>

#include "verdap/lang/parser.hpp"

namespace verdap::lang::detail {

/// Resolves names and assigns sorts in a freshly parsed unit. Program
/// variables come out of the parser with a placeholder sort; the checker
/// rebuilds every expression with its real sort.
std::optional<TranslationUnit> check_unit(const TranslationUnit& raw,
                                          std::vector<Diagnostic>& diags);

std::optional<Expr> check_standalone(const Expr& raw, const std::string& file, const SortEnv& env,
                                     std::vector<Diagnostic>& diags);

} // namespace verdap::lang::detail
