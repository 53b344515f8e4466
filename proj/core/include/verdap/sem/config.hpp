#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "verdap/lang/ast.hpp"
#include "verdap/sem/store.hpp"

namespace verdap::sem {

using lang::SourceLoc;
using lang::StmtList;

class InvalidSchedule : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotSteppable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FrameInfo {
  std::string proc_name;
  std::optional<SourceLoc> call_site;
  std::size_t local_scope_depth = 1;

  bool operator==(const FrameInfo&) const = default;
};

enum class ObligationKind {
  AssertFailure,
  PreconditionFailure,
  PostconditionFailure,
  InvariantInitFailure,
  InvariantPreserveFailure,
  DivisionByZero,
};

/// Short name used in reports: assert, requires, ensures, ...
const char* kind_name(ObligationKind kind);
/// Human description: "assertion might fail", ...
const char* kind_description(ObligationKind kind);

struct ObligationStatus {
  enum class Kind { Open, Failed, Unknown };

  Kind kind = Kind::Open;
  std::optional<lang::Model> model;
  std::string note;

  bool operator==(const ObligationStatus&) const = default;
};

const char* status_name(ObligationStatus::Kind kind);

/// Cached satisfiability of a Sequential node's path condition.
enum class Feasibility { Unchecked, Sat, Unknown };

class Config;

struct Sequential {
  SymbolicStore store;
  PathCondition path;
  StmtList rest;  // nonempty; an empty rest is a Done node
  std::vector<FrameInfo> frames;
  Feasibility feasibility = Feasibility::Unchecked;
};

struct Parallel {
  std::vector<Config> children;
};

struct Obligation {
  PathCondition path;
  Expr negated;
  ObligationKind kind;
  SourceLoc at;
  ObligationStatus status;
  /// Top-level procedure whose verification produced this obligation.
  std::string procedure;
};

struct Done {
  SymbolicStore store;
  PathCondition path;
  std::vector<FrameInfo> frames;
};

struct ConfigNode {
  std::variant<Sequential, Parallel, Obligation, Done> kind;
};

/// Immutable configuration tree with shared subtrees.
class Config {
public:
  Config(Sequential s);
  Config(Parallel p);
  Config(Obligation o);
  Config(Done d);

  const ConfigNode& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

  template <class T> const T* as() const { return std::get_if<T>(&node_->kind); }

  /// Structural equality (ignores feasibility caches).
  friend bool operator==(const Config& a, const Config& b);

private:
  std::shared_ptr<const ConfigNode> node_;
};

/// Sequential with an empty rest collapses to Done.
Config make_leaf(SymbolicStore store, PathCondition path, StmtList rest,
                 std::vector<FrameInfo> frames, Feasibility feasibility = Feasibility::Unchecked);

using Schedule = std::vector<std::size_t>;

/// Thread name: indices concatenated, indices above 9 bracketed.
std::string thread_name(const Schedule& sigma);
bool has_prefix(const Schedule& s, const Schedule& prefix);

/// Schedules addressing Sequential leaves, in left-to-right order.
std::vector<Schedule> schedules(const Config& c);
/// Schedules addressing Obligation leaves with the given status.
std::vector<Schedule> obligation_schedules(const Config& c, ObligationStatus::Kind status);
/// Every leaf schedule (Sequential, Obligation, Done).
std::vector<Schedule> leaf_schedules(const Config& c);

/// The node at `sigma`, usually a leaf. An interior Parallel is returned
/// as is; step() rejects it.
const Config& resolve(const Config& c, const Schedule& sigma);
/// Returns `c` with the node at `sigma` replaced; siblings are shared.
Config replace_at(const Config& c, const Schedule& sigma, Config replacement);

/// Multi-line debugging dump. `canonical` renumbers logic variables in
/// order of first occurrence so alpha-equivalent trees dump identically.
std::string dump(const Config& c, bool canonical = false);

} // namespace verdap::sem
