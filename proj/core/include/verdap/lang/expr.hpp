#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace verdap::lang {

using BigInt = boost::multiprecision::cpp_int;

enum class Sort { Int, Bool };

enum class UnaryOp { Neg, Not };

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or, Implies,
};

const char* sort_name(Sort sort);

/// Source position of an expression. Zero means "synthesized".
struct Pos {
  int line = 0;
  int column = 0;
};

struct ExprNode;

/// Immutable, structurally shared expression tree. Copying an Expr is a
/// reference-count bump. Equality is structural and ignores positions.
class Expr {
public:
  Expr() = delete;

  static Expr int_lit(BigInt value, Pos pos = {});
  static Expr bool_lit(bool value, Pos pos = {});
  static Expr prog_var(std::string name, Sort sort, Pos pos = {});
  static Expr logic_var(std::string name, std::uint64_t index, Sort sort);
  static Expr unary(UnaryOp op, Expr arg, Pos pos = {});
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, Pos pos = {});

  const ExprNode& node() const { return *node_; }
  Sort sort() const;
  Pos pos() const;

  bool is_true() const;
  bool is_false() const;

  /// Identity of the shared node, for cheap "unchanged" checks.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct IntLit { BigInt value; };
struct BoolLit { bool value; };
struct ProgVar { std::string name; };
struct LogicVar { std::string name; std::uint64_t index; };
struct Unary { UnaryOp op; Expr arg; };
struct Binary { BinaryOp op; Expr lhs; Expr rhs; };

struct ExprNode {
  std::variant<IntLit, BoolLit, ProgVar, LogicVar, Unary, Binary> kind;
  Sort sort;
  Pos pos;
};

/// Identity of a logical variable, used as the key of models.
struct LogicVarKey {
  std::string name;
  std::uint64_t index = 0;
  Sort sort = Sort::Int;

  auto operator<=>(const LogicVarKey& other) const {
    if (auto c = index <=> other.index; c != 0) return c;
    return name <=> other.name;
  }
  bool operator==(const LogicVarKey& other) const {
    return index == other.index && name == other.name;
  }
};

using Value = std::variant<BigInt, bool>;
using Model = std::map<LogicVarKey, Value>;

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Concrete evaluation of a logic-level expression. Euclidean div/mod;
/// division by zero yields 0 (div) and the dividend (mod), which is never
/// observable on paths guarded by a nonzero-divisor check. Variables
/// missing from the model raise EvalError, as do ProgVars.
Value evaluate(const Expr& e, const Model& model);
bool evaluate_bool(const Expr& e, const Model& model);

BigInt euclid_div(const BigInt& a, const BigInt& b);
BigInt euclid_mod(const BigInt& a, const BigInt& b);

/// Literal-only constant folding: literal/literal arithmetic, comparisons
/// and connectives, double negation, negated literals, and `0 - e` as `-e`.
Expr fold(const Expr& e);

std::set<std::string> free_vars(const Expr& e);
std::set<LogicVarKey> free_logic_vars(const Expr& e);
bool mentions_prog_var(const Expr& e, const std::string& name);
bool has_prog_vars(const Expr& e);

Expr conjunction(const std::vector<Expr>& conjuncts);
Expr negate(const Expr& e);

/// MiniVer surface syntax (ASCII). Logic variables print as `name#index`.
std::string to_string(const Expr& e);
/// Mathematical rendering for the debugger UI: x₀, −, ¬, ∧, ≤ ...
std::string to_display(const Expr& e);
std::string display_name(const LogicVarKey& key);
std::string to_display(const Value& v);
std::string to_display(const Model& model);

int precedence(BinaryOp op);

} // namespace verdap::lang
