#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "verdap/dap/protocol.hpp"
#include "verdap/lang/ast.hpp"
#include "verdap/sem/config.hpp"
#include "verdap/sem/engine.hpp"
#include "verdap/solve/solver.hpp"

namespace verdap::dap {

/// One registered DAP thread: a steppable branch or a failed/undecided
/// obligation, identified by its schedule.
struct ThreadEntry {
  enum class Kind { Branch, Failed, Unknown };

  int id = 0;
  sem::Schedule schedule;
  Kind kind = Kind::Branch;
  /// Identity of the leaf node, to tell which threads a request changed.
  const void* leaf = nullptr;

  std::string name() const;
};

/// Debug server state for one program. handle() is the whole protocol
/// surface: one request in, its response and any events out, in order.
class DebugSession {
public:
  DebugSession();
  ~DebugSession();

  std::vector<json> handle(const json& request);

  bool disconnected() const { return disconnected_; }
  bool launched() const { return unit_.has_value(); }

  const sem::Config& current() const { return current_; }
  const std::vector<ThreadEntry>& threads() const { return registry_; }
  std::size_t history_size() const { return history_.size(); }
  const solve::SolverConfig& solver_config() const { return solver_cfg_; }
  std::uint64_t fresh_counter() const { return counter_.next(); }

private:
  struct Snapshot {
    sem::Config config;
    std::vector<ThreadEntry> registry;
  };
  struct FrameRef {
    sem::Schedule schedule;
    std::size_t frame;  // index into the leaf's frames, 0 = outermost
  };
  struct VarRef {
    sem::Schedule schedule;
    std::size_t frame;
    bool state;  // the synthetic State scope
  };

  json response(const json& request, bool success, json body = nullptr, const std::string& message = {});
  json event(const std::string& name, json body = json::object());

  void on_initialize(const json& req, std::vector<json>& out);
  void on_launch(const json& req, std::vector<json>& out);
  void on_set_breakpoints(const json& req, std::vector<json>& out);
  void on_threads(const json& req, std::vector<json>& out);
  void on_stack_trace(const json& req, std::vector<json>& out);
  void on_scopes(const json& req, std::vector<json>& out);
  void on_variables(const json& req, std::vector<json>& out);
  void on_step(const json& req, std::vector<json>& out, sem::CallMode mode);
  void on_continue(const json& req, std::vector<json>& out);
  void on_step_back(const json& req, std::vector<json>& out);
  void on_evaluate(const json& req, std::vector<json>& out);

  const ThreadEntry& thread(const json& args) const;
  const ThreadEntry* find_thread(int id) const;

  /// Rebuilds the registry for `current_`, carrying ids across `moved`.
  std::vector<ThreadEntry> reconcile(const std::map<sem::Schedule, sem::Schedule>& moved);
  /// Emits thread/output/stopped/terminated events for a registry change.
  void transition(std::vector<ThreadEntry> next, std::vector<json>& out,
                  const std::string& stop_reason, const std::set<sem::Schedule>& breakpoint_hits,
                  bool report_obligations);
  void reset_handles();

  std::set<int> breakpoint_lines() const;
  std::string program_path() const;

  int seq_ = 1;
  bool disconnected_ = false;
  bool terminated_ = false;

  std::optional<lang::TranslationUnit> unit_;
  std::string program_;
  solve::SolverConfig solver_cfg_;
  std::unique_ptr<solve::Solver> solver_;
  sem::FreshCounter counter_;
  sem::Config current_;
  std::vector<Snapshot> history_;
  std::vector<ThreadEntry> registry_;
  int next_thread_id_ = 1;

  /// Requested breakpoint lines per canonical source path.
  std::map<std::string, std::vector<int>> breakpoints_;

  std::vector<FrameRef> frames_;
  std::vector<VarRef> var_refs_;
};

/// Canonical form of a source path used to match breakpoints to programs.
std::string canonical_path(const std::string& path);

} // namespace verdap::dap
