#pragma once

#include <map>
#include <string>
#include <string_view>

#include "verdap/lang/expr.hpp"
#include "verdap/solve/solver.hpp"

namespace verdap::solve {

/// SMT-LIB symbol for a logic variable: name and index concatenated
/// (`x0`), with an underscore when the name already ends in a digit.
std::string smt_symbol(const lang::LogicVarKey& key);

/// Quotes `symbol` with |...| unless it is a simple, non-reserved symbol.
std::string smt_quote(const std::string& symbol);

/// Complete script: logic, declarations, assertion, check-sat, get-model.
/// QF_NIA when a product or div/mod has no literal factor, else QF_LIA.
std::string to_smtlib(const lang::Expr& f);

/// Names declared by to_smtlib(f), keyed by the unquoted symbol.
std::map<std::string, lang::LogicVarKey> smt_declarations(const lang::Expr& f);

/// Parses solver output: first line sat/unsat/unknown, then on sat the
/// `(model ...)` or bare list of define-funs. Throws MalformedModel.
SatResult parse_response(std::string_view output,
                         const std::map<std::string, lang::LogicVarKey>& declarations);

} // namespace verdap::solve
