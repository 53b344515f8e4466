#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "verdap/lang/parser.hpp"
#include "verdap/sem/engine.hpp"
#include "verdap/solve/solver.hpp"

namespace verdap::driver {

enum class Verdict { Verified, Failed, Unknown };

const char* verdict_name(Verdict v);

struct ObligationReport {
  sem::ObligationKind kind;
  lang::SourceLoc at;
  /// Open means discharged.
  sem::ObligationStatus::Kind status;
  std::optional<lang::Model> countermodel;
  std::string note;
};

struct ProcedureReport {
  std::string name;
  Verdict verdict = Verdict::Verified;
  std::vector<ObligationReport> obligations;
  std::string note;
};

struct VerifyStats {
  std::size_t steps = 0;
  std::size_t solver_calls = 0;
  long long elapsed_ms = 0;
};

struct VerifyReport {
  std::vector<ProcedureReport> procedures;
  VerifyStats stats;
  bool fuel_exhausted = false;

  /// 0 all verified, 1 something failed or is unknown, 3 out of fuel.
  int exit_code() const;
};

struct VerifyOptions {
  solve::SolverConfig solver;
  std::size_t fuel = 100'000;
};

/// Explores every schedule leftmost-first in contract mode, pruning after
/// each step, and collects every obligation decided along the way.
VerifyReport verify_unit(const lang::TranslationUnit& unit, const VerifyOptions& options);

struct VerifyOutcome {
  std::optional<VerifyReport> report;
  std::vector<lang::Diagnostic> diagnostics;
  /// 2 on parse failure, otherwise report->exit_code().
  int exit_code = 0;
};

VerifyOutcome verify_source(std::string_view source, const std::string& file,
                            const VerifyOptions& options);

std::string render_human(const VerifyReport& report);
nlohmann::json to_json(const VerifyReport& report);

} // namespace verdap::driver
