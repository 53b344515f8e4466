#include "verdap/solve/backends.hpp"
#include "verdap/solve/process.hpp"
#include "verdap/solve/smtlib.hpp"

namespace verdap::solve {

ExternalSolver::ExternalSolver(std::vector<std::string> command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

SatResult ExternalSolver::decide(const Expr& f) {
  ProcessOutput proc;
  try {
    proc = run_process(command_, to_smtlib(f), timeout_);
  } catch (const SpawnError& e) {
    throw SolverUnavailable(e.what());
  }
  if (proc.timed_out) {
    return SatResult{Verdict::Unknown, std::nullopt,
                     "timeout after " + std::to_string(timeout_.count()) + " ms"};
  }

  SatResult r = parse_response(proc.out, smt_declarations(f));
  if (r.verdict != Verdict::Sat) return r;

  // Solvers may omit variables whose value does not matter.
  for (const auto& key : lang::free_logic_vars(f)) {
    if (r.model->count(key)) continue;
    if (key.sort == lang::Sort::Int) {
      (*r.model)[key] = lang::BigInt(0);
    } else {
      (*r.model)[key] = false;
    }
  }
  bool holds = false;
  try {
    holds = lang::evaluate_bool(f, *r.model);
  } catch (const lang::EvalError& e) {
    throw MalformedModel(e.what());
  }
  if (!holds) throw MalformedModel("model does not satisfy the query");
  return r;
}

} // namespace verdap::solve
