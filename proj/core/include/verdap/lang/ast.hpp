#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "verdap/lang/expr.hpp"

namespace verdap::lang {

struct SourceLoc {
  std::string file;
  int line = 1;
  int column = 1;

  bool operator==(const SourceLoc&) const = default;
};

std::string to_string(const SourceLoc& loc);

struct StmtNode;

/// Shared immutable statement handle; see Expr.
class Stmt {
public:
  explicit Stmt(std::shared_ptr<const StmtNode> node) : node_(std::move(node)) {}

  const StmtNode& node() const { return *node_; }
  const SourceLoc& loc() const;
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Stmt& a, const Stmt& b);

private:
  std::shared_ptr<const StmtNode> node_;
};

using StmtList = std::vector<Stmt>;

/// Where a synthesized assume/assert came from; drives obligation kinds.
enum class AssumeOrigin { User, Requires };
enum class AssertOrigin { User, Ensures, Invariant };

struct Assign {
  std::string target;
  Expr rhs;
};
struct LocalDecl {
  std::string name;
  Sort sort;
  Expr init;
};
struct Assume {
  Expr cond;
  AssumeOrigin origin = AssumeOrigin::User;
};
struct Assert {
  Expr cond;
  AssertOrigin origin = AssertOrigin::User;
};
struct If {
  Expr cond;
  StmtList then_body;
  StmtList else_body;
};
struct While {
  Expr cond;
  Expr invariant;
  StmtList body;
  SourceLoc invariant_loc;
};
struct Call {
  std::optional<std::string> result;
  std::string callee;
  std::vector<Expr> args;
};
/// Engine-internal: leaves an inlined callee frame, copying `result` into
/// the caller's target. Never produced by the parser.
struct ExitFrame {
  std::optional<std::string> result;
};

struct StmtNode {
  std::variant<Assign, LocalDecl, Assume, Assert, If, While, Call, ExitFrame> kind;
  SourceLoc loc;
};

template <class T> Stmt make_stmt(T kind, SourceLoc loc) {
  return Stmt(std::make_shared<const StmtNode>(StmtNode{std::move(kind), std::move(loc)}));
}

struct Param {
  std::string name;
  Sort sort;
  bool operator==(const Param&) const = default;
};

struct Procedure {
  std::string name;
  std::vector<Param> params;
  std::optional<Sort> return_sort;
  Expr precondition = Expr::bool_lit(true);
  Expr postcondition = Expr::bool_lit(true);
  bool has_precondition = false;
  bool has_postcondition = false;
  SourceLoc precondition_loc;
  SourceLoc postcondition_loc;
  StmtList body;
  SourceLoc loc;

  std::optional<Sort> param_sort(const std::string& param) const;
};

struct Global {
  std::string name;
  Sort sort;
  Expr init;
  SourceLoc loc;
};

struct TranslationUnit {
  std::string file;
  std::vector<Global> globals;
  std::vector<Procedure> procedures;

  const Procedure* find_procedure(const std::string& name) const;
  const Global* find_global(const std::string& name) const;
};

/// Reserved identifier naming a procedure's return value.
inline constexpr const char* kResultName = "result";

std::optional<SourceLoc> loc_of(const StmtList& program);

/// Identifiers assigned anywhere in `body` (Assign, LocalDecl, Call
/// results), including nested bodies.
std::set<std::string> modified_vars(const StmtList& body);

/// Every line on which some source statement of the unit starts.
std::set<int> statement_lines(const TranslationUnit& unit);

/// Structural equality ignoring source locations.
bool same_structure(const TranslationUnit& a, const TranslationUnit& b);
bool same_structure(const StmtList& a, const StmtList& b);

} // namespace verdap::lang
