#pragma once

#include <map>
#include <set>
#include <vector>

#include "verdap/lang/ast.hpp"
#include "verdap/sem/config.hpp"
#include "verdap/solve/solver.hpp"

namespace verdap::sem {

enum class CallMode { Contract, Inline };

struct StepContext {
  const lang::TranslationUnit& unit;
  FreshCounter& counter;
  CallMode mode = CallMode::Contract;
};

/// One child per procedure in declaration order, each running
/// `assume P; body; assert Q` over fresh inputs. main is prefixed by the
/// global initializers. Trivially true contracts are left out.
Config initial_config(const lang::TranslationUnit& unit, FreshCounter& counter);

/// Successor of the leaf at `sigma` under the step rules; throws
/// InvalidSchedule or NotSteppable.
Config step(const Config& c, const Schedule& sigma, StepContext& ctx);

/// The rule applied to a single Sequential leaf.
Config step_leaf(const Sequential& leaf, StepContext& ctx);

struct DecidedObligation {
  ObligationKind kind;
  SourceLoc at;
  std::string procedure;
  ObligationStatus::Kind status;  // Open here means discharged
  std::optional<lang::Model> model;
  std::string note;
};

struct PruneResult {
  Config config;
  /// Old leaf schedule -> new schedule, for every surviving leaf.
  std::map<Schedule, Schedule> moved;
  /// Obligations decided during this pass, in tree order.
  std::vector<DecidedObligation> decided;
  /// Leaves removed because their path is unsat, or because they ended.
  std::vector<Schedule> removed;
};

/// Eager pruning: drops Sequential leaves with unsat paths, Done leaves,
/// and discharged obligations; decides open obligations; removes emptied
/// non-root Parallels. Never flattens or reorders.
PruneResult prune(const Config& c, solve::Solver& solver);

enum class StopReason { Breakpoint, Ended, Split, Obligation, FuelExhausted };

const char* stop_reason_name(StopReason r);

struct RunResult {
  Config config;
  StopReason reason;
  /// Steppable descendants of the original thread at the stop.
  std::vector<Schedule> threads;
  std::size_t steps = 0;
  std::map<Schedule, Schedule> moved;
  std::vector<DecidedObligation> decided;
};

/// Steps (contract mode) and prunes the thread at `sigma` until it hits a
/// breakpoint line, ends, splits, produces a failed or unknown
/// obligation, or runs out of fuel. Always takes at least one step.
RunResult run_to_break(const Config& c, const Schedule& sigma, const std::set<int>& breakpoints,
                       solve::Solver& solver, StepContext& ctx, std::size_t fuel = 10'000);

/// Line of the next statement of the Sequential leaf at `sigma`.
std::optional<int> current_line(const Config& c, const Schedule& sigma);

/// Composes leaf moves: a -> b then b -> c.
std::map<Schedule, Schedule> compose(const std::map<Schedule, Schedule>& first,
                                     const std::map<Schedule, Schedule>& second);

} // namespace verdap::sem
