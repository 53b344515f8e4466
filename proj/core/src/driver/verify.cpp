#include "verdap/driver/verify.hpp"

#include <chrono>
#include <limits>
#include <map>
#include <sstream>

namespace verdap::driver {

namespace {

const char* status_word(sem::ObligationStatus::Kind s) {
  switch (s) {
  case sem::ObligationStatus::Kind::Open: return "discharged";
  case sem::ObligationStatus::Kind::Failed: return "failed";
  case sem::ObligationStatus::Kind::Unknown: return "unknown";
  }
  return "?";
}

nlohmann::json value_json(const lang::Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  const auto& i = std::get<lang::BigInt>(v);
  if (i >= std::numeric_limits<long long>::min() && i <= std::numeric_limits<long long>::max()) {
    return static_cast<long long>(i);
  }
  return i.str();
}

} // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Verified: return "verified";
  case Verdict::Failed: return "failed";
  case Verdict::Unknown: return "unknown";
  }
  return "?";
}

int VerifyReport::exit_code() const {
  if (fuel_exhausted) return 3;
  for (const auto& p : procedures) {
    if (p.verdict != Verdict::Verified) return 1;
  }
  return 0;
}

VerifyReport verify_unit(const lang::TranslationUnit& unit, const VerifyOptions& options) {
  auto start = std::chrono::steady_clock::now();
  auto solver = solve::make_solver(options.solver);
  sem::FreshCounter counter;
  sem::StepContext ctx{unit, counter, sem::CallMode::Contract};

  VerifyReport report;
  std::map<std::string, std::size_t> index;
  for (const auto& proc : unit.procedures) {
    index[proc.name] = report.procedures.size();
    report.procedures.push_back(ProcedureReport{proc.name, Verdict::Verified, {}, {}});
  }
  auto record = [&](const std::vector<sem::DecidedObligation>& decided) {
    for (const auto& d : decided) {
      report.procedures[index.at(d.procedure)].obligations.push_back(
          ObligationReport{d.kind, d.at, d.status, d.model, d.note});
    }
  };

  sem::PruneResult pr = sem::prune(sem::initial_config(unit, counter), *solver);
  record(pr.decided);
  sem::Config current = pr.config;
  for (;;) {
    std::vector<sem::Schedule> open = sem::schedules(current);
    if (open.empty()) break;
    if (report.stats.steps >= options.fuel) {
      report.fuel_exhausted = true;
      for (const auto& s : open) {
        const auto* leaf = sem::resolve(current, s).as<sem::Sequential>();
        auto& proc = report.procedures[index.at(leaf->frames.front().proc_name)];
        proc.note = "fuel exhausted before exploration finished";
      }
      break;
    }
    sem::Config stepped = sem::step(current, open.front(), ctx);
    ++report.stats.steps;
    pr = sem::prune(stepped, *solver);
    record(pr.decided);
    current = pr.config;
  }

  for (auto& proc : report.procedures) {
    bool failed = false;
    bool unknown = !proc.note.empty();
    for (const auto& o : proc.obligations) {
      failed = failed || o.status == sem::ObligationStatus::Kind::Failed;
      unknown = unknown || o.status == sem::ObligationStatus::Kind::Unknown;
    }
    proc.verdict = failed ? Verdict::Failed : unknown ? Verdict::Unknown : Verdict::Verified;
  }
  report.stats.solver_calls = solver->backend_calls();
  report.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
  return report;
}

VerifyOutcome verify_source(std::string_view source, const std::string& file,
                            const VerifyOptions& options) {
  VerifyOutcome out;
  lang::ParseResult parsed = lang::parse_program(source, file);
  if (!parsed.ok()) {
    out.diagnostics = std::move(parsed.diagnostics);
    out.exit_code = 2;
    return out;
  }
  out.report = verify_unit(*parsed.unit, options);
  out.exit_code = out.report->exit_code();
  return out;
}

std::string render_human(const VerifyReport& report) {
  std::ostringstream os;
  for (const auto& proc : report.procedures) {
    os << proc.name << ": " << verdict_name(proc.verdict);
    if (proc.verdict != Verdict::Verified) {
      auto bad = sem::ObligationStatus::Kind::Failed;
      if (proc.verdict == Verdict::Unknown) bad = sem::ObligationStatus::Kind::Unknown;
      for (const auto& o : proc.obligations) {
        if (o.status == bad) {
          os << " (" << sem::kind_name(o.kind) << ", line " << o.at.line << ")";
          break;
        }
      }
    }
    os << '\n';
    for (const auto& o : proc.obligations) {
      os << "  " << sem::kind_name(o.kind) << " at line " << o.at.line << ": "
         << status_word(o.status);
      if (o.countermodel) {
        os << ", counterexample: "
           << (o.countermodel->empty() ? std::string("any input") : lang::to_display(*o.countermodel));
      }
      if (o.status == sem::ObligationStatus::Kind::Unknown && !o.note.empty()) os << " (" << o.note << ")";
      os << '\n';
    }
    if (!proc.note.empty()) os << "  note: " << proc.note << '\n';
  }
  os << "stats: " << report.stats.steps << " steps, " << report.stats.solver_calls
     << " solver calls, " << report.stats.elapsed_ms << " ms\n";
  return os.str();
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json procs = nlohmann::json::array();
  for (const auto& proc : report.procedures) {
    nlohmann::json obligations = nlohmann::json::array();
    for (const auto& o : proc.obligations) {
      nlohmann::json entry = {{"kind", sem::kind_name(o.kind)},
                              {"line", o.at.line},
                              {"column", o.at.column},
                              {"status", status_word(o.status)}};
      if (o.countermodel) {
        nlohmann::json model = nlohmann::json::object();
        for (const auto& [key, value] : *o.countermodel) model[lang::display_name(key)] = value_json(value);
        entry["countermodel"] = model;
      } else {
        entry["countermodel"] = nullptr;
      }
      if (!o.note.empty()) entry["note"] = o.note;
      obligations.push_back(std::move(entry));
    }
    nlohmann::json p = {{"name", proc.name}, {"verdict", verdict_name(proc.verdict)}, {"obligations", obligations}};
    if (!proc.note.empty()) p["note"] = proc.note;
    procs.push_back(std::move(p));
  }
  return {{"procedures", procs},
          {"fuelExhausted", report.fuel_exhausted},
          {"stats",
           {{"steps", report.stats.steps},
            {"solverCalls", report.stats.solver_calls},
            {"elapsedMs", report.stats.elapsed_ms}}},
          {"exitCode", report.exit_code()}};
}

} // namespace verdap::driver
