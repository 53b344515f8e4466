#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "verdap/lang/expr.hpp"

namespace verdap::solve {

using lang::Expr;
using lang::Model;

enum class Verdict { Sat, Unsat, Unknown };

const char* verdict_name(Verdict v);

struct SatResult {
  Verdict verdict = Verdict::Unknown;
  /// Present iff verdict == Sat; assigns every free logic variable.
  std::optional<Model> model;
  /// Why the answer is Unknown, when there is something to say.
  std::string note;
};

struct SolverConfig {
  struct External {
    std::vector<std::string> command;
  };
  struct BruteForce {
    int bound = 8;
  };

  std::variant<External, BruteForce> backend = External{{"z3", "-in"}};
  std::chrono::milliseconds timeout{2000};

  static SolverConfig external(std::string_view command_line);
  static SolverConfig bruteforce(int bound);
};

std::string describe(const SolverConfig& cfg);

/// The external solver could not be started.
class SolverUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The external solver produced output that is not a valid answer.
class MalformedModel : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Solver {
public:
  virtual ~Solver() = default;

  /// Decides `f`, a boolean formula over logic variables. Closed formulas
  /// are answered without consulting the backend.
  SatResult check_sat(const Expr& f);

  /// Number of queries that reached the backend.
  std::size_t backend_calls() const { return calls_; }

protected:
  virtual SatResult decide(const Expr& folded) = 0;

private:
  std::size_t calls_ = 0;
};

std::unique_ptr<Solver> make_solver(const SolverConfig& cfg);

/// check_sat with SolverUnavailable / MalformedModel mapped to Unknown.
SatResult check_sat_or_unknown(Solver& solver, const Expr& f);

enum class Entailment { Valid, Invalid, Unknown };

struct EntailResult {
  Entailment verdict = Entailment::Unknown;
  std::optional<Model> countermodel;
  std::string note;
};

/// Does the conjunction of `assumptions` imply `goal`? Valid iff
/// assumptions ∧ ¬goal is unsat. Solver failures come back as Unknown.
EntailResult entails(Solver& solver, const std::vector<Expr>& assumptions, const Expr& goal);

/// Whitespace split honouring single and double quotes.
std::vector<std::string> split_command(std::string_view command_line);

} // namespace verdap::solve
