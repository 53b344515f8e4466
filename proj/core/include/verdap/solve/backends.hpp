#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "verdap/solve/linear.hpp"
#include "verdap/solve/solver.hpp"

namespace verdap::solve {

/// Exhaustive enumeration over {-bound..bound} per integer variable.
///
/// Sat answers always carry a witness. Unsat is reported only when it is
/// bound-independent: the formula has no integer variables, the linear
/// relaxation is infeasible, or the relaxation confines every integer
/// variable to the enumerated box. Anything else is Unknown.
class BruteForceSolver final : public Solver {
public:
  explicit BruteForceSolver(int bound, std::size_t max_points = 500'000);

  int bound() const { return bound_; }

protected:
  SatResult decide(const Expr& f) override;

private:
  int bound_;
  std::size_t max_points_;
};

/// One solver process per query, SMT-LIB v2 over stdin/stdout.
class ExternalSolver final : public Solver {
public:
  ExternalSolver(std::vector<std::string> command, std::chrono::milliseconds timeout);

  const std::vector<std::string>& command() const { return command_; }

protected:
  SatResult decide(const Expr& f) override;

private:
  std::vector<std::string> command_;
  std::chrono::milliseconds timeout_;
};

} // namespace verdap::solve
