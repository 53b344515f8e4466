#include "verdap/solve/solver.hpp"

#include "verdap/solve/backends.hpp"

namespace verdap::solve {

const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Sat: return "sat";
  case Verdict::Unsat: return "unsat";
  case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

SolverConfig SolverConfig::external(std::string_view command_line) {
  SolverConfig cfg;
  cfg.backend = External{split_command(command_line)};
  return cfg;
}

SolverConfig SolverConfig::bruteforce(int bound) {
  SolverConfig cfg;
  cfg.backend = BruteForce{bound < 1 ? 1 : bound};
  return cfg;
}

std::string describe(const SolverConfig& cfg) {
  if (auto* bf = std::get_if<SolverConfig::BruteForce>(&cfg.backend)) {
    return "bruteforce(" + std::to_string(bf->bound) + ")";
  }
  std::string out;
  for (const auto& part : std::get<SolverConfig::External>(cfg.backend).command) {
    if (!out.empty()) out += ' ';
    out += part;
  }
  return out;
}

SatResult Solver::check_sat(const Expr& f) {
  Expr folded = lang::fold(f);
  if (folded.is_true()) return SatResult{Verdict::Sat, Model{}, {}};
  if (folded.is_false()) return SatResult{Verdict::Unsat, std::nullopt, {}};
  ++calls_;
  return decide(folded);
}

std::unique_ptr<Solver> make_solver(const SolverConfig& cfg) {
  if (auto* bf = std::get_if<SolverConfig::BruteForce>(&cfg.backend)) {
    return std::make_unique<BruteForceSolver>(bf->bound);
  }
  return std::make_unique<ExternalSolver>(std::get<SolverConfig::External>(cfg.backend).command,
                                          cfg.timeout);
}

SatResult check_sat_or_unknown(Solver& solver, const Expr& f) {
  try {
    return solver.check_sat(f);
  } catch (const SolverUnavailable& e) {
    return SatResult{Verdict::Unknown, std::nullopt, std::string("solver unavailable: ") + e.what()};
  } catch (const MalformedModel& e) {
    return SatResult{Verdict::Unknown, std::nullopt, std::string("malformed solver output: ") + e.what()};
  }
}

EntailResult entails(Solver& solver, const std::vector<Expr>& assumptions, const Expr& goal) {
  std::vector<Expr> query = assumptions;
  query.push_back(lang::negate(goal));
  SatResult r = check_sat_or_unknown(solver, lang::conjunction(query));
  switch (r.verdict) {
  case Verdict::Unsat: return EntailResult{Entailment::Valid, std::nullopt, {}};
  case Verdict::Sat: return EntailResult{Entailment::Invalid, std::move(r.model), {}};
  case Verdict::Unknown: break;
  }
  return EntailResult{Entailment::Unknown, std::nullopt, std::move(r.note)};
}

std::vector<std::string> split_command(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_word) out.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (in_word) out.push_back(std::move(cur));
  return out;
}

} // namespace verdap::solve
