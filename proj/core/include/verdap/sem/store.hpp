#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "verdap/lang/ast.hpp"
#include "verdap/lang/expr.hpp"

namespace verdap::sem {

using lang::Expr;
using lang::Sort;

class UnboundVariable : public std::runtime_error {
public:
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

/// Source of fresh logic variables for one session.
class FreshCounter {
public:
  std::uint64_t next() const { return next_; }
  Expr fresh(const std::string& name, Sort sort) { return Expr::logic_var(name, next_++, sort); }

private:
  std::uint64_t next_ = 0;
};

struct Binding {
  std::string name;
  Sort sort;
  Expr value;

  bool operator==(const Binding&) const = default;
};

/// Insertion-ordered so variable views render in declaration order.
using Scope = std::vector<Binding>;

/// Scope 0 holds globals; every active frame owns one further scope.
/// Lookups see the innermost frame's scope, then globals.
class SymbolicStore {
public:
  SymbolicStore() : scopes_(1) {}

  const std::vector<Scope>& scopes() const { return scopes_; }
  std::size_t depth() const { return scopes_.size(); }
  void push_scope() { scopes_.emplace_back(); }
  void pop_scope();

  const Binding* lookup(const std::string& name) const;
  /// Binds (or rebinds) `name` in the innermost scope.
  void bind_local(const std::string& name, Sort sort, Expr value);
  void bind_global(const std::string& name, Sort sort, Expr value);
  /// Updates the visible binding of `name`; throws UnboundVariable.
  void assign(const std::string& name, Expr value);

  /// Names visible from the innermost scope.
  std::set<std::string> visible() const;

  bool operator==(const SymbolicStore&) const = default;

private:
  std::vector<Scope> scopes_;
};

/// Ordered conjuncts; empty means true.
struct PathCondition {
  std::vector<Expr> conjuncts;

  /// Appends `e` unless it is literally true.
  PathCondition with(const Expr& e) const;
  Expr formula() const { return lang::conjunction(conjuncts); }
  std::string render() const;

  bool operator==(const PathCondition&) const = default;
};

/// A divisor that must be nonzero when evaluated under `guards`.
struct DivisionCheck {
  std::vector<Expr> guards;
  Expr divisor;
  lang::Pos pos;
};

/// s(e): replaces program variables by their bindings, then folds.
Expr substitute(const SymbolicStore& s, const Expr& e);

/// s(e) plus the division checks it implies. Guards follow the
/// short-circuit structure: the right operand of `a && b` and `a ==> b`
/// is only evaluated under s(a), of `a || b` under ¬s(a).
Expr substitute(const SymbolicStore& s, const Expr& e, std::vector<DivisionCheck>& checks);

/// ŝ: rebinds each of `vars` to a fresh logic variable of the same sort.
SymbolicStore freshen(const SymbolicStore& s, const std::set<std::string>& vars,
                      FreshCounter& counter);

} // namespace verdap::sem
