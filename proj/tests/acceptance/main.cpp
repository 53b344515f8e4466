// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/concrete.hpp"
#include "support/dap_client.hpp"
#include "support/env.hpp"
#include "support/explore.hpp"
#include "support/generator.hpp"
#include "verdap/dap/session.hpp"
#include "verdap/driver/verify.hpp"
#include "verdap/solve/backends.hpp"
#include "verdap/solve/process.hpp"

using namespace verdap;
using namespace verdap::testing;
using lang::BinaryOp;
using lang::Expr;
using lang::Sort;

namespace {

using Clock = std::chrono::steady_clock;

/// Collects failed expectations of one criterion.
class Checker {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string out;
    for (std::size_t i = 0; i < failures_.size() && i < 5; ++i) out += "\n    - " + failures_[i];
    if (failures_.size() > 5) out += "\n    ... and " + std::to_string(failures_.size() - 5) + " more";
    return out;
  }

private:
  std::vector<std::string> failures_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Expr lv(const std::string& name, std::uint64_t index) { return Expr::logic_var(name, index, Sort::Int); }
Expr lit(int v) { return Expr::int_lit(v); }
Expr bin(BinaryOp op, Expr a, Expr b) { return Expr::binary(op, std::move(a), std::move(b)); }

std::string path_text(const sem::PathCondition& p) {
  std::string out;
  for (const auto& c : p.conjuncts) out += "[" + lang::to_string(c) + "]";
  return out.empty() ? "true" : out;
}

bool same_path(const sem::PathCondition& p, const std::vector<Expr>& expected) {
  return p.conjuncts == expected;
}

Expr binding(const sem::SymbolicStore& s, const std::string& name) {
  const sem::Binding* b = s.lookup(name);
  if (!b) throw std::runtime_error("no binding for " + name);
  return b->value;
}

std::string vars_value(const json& vars, const std::string& name) {
  for (const auto& v : vars["body"]["variables"]) {
    if (v["name"] == name) return v["value"];
  }
  return "<missing>";
}

std::vector<std::string> thread_names(const json& threads_body) {
  std::vector<std::string> out;
  for (const auto& t : threads_body["threads"]) out.push_back(t["name"]);
  return out;
}

int thread_id(const json& threads_body, const std::string& name) {
  for (const auto& t : threads_body["threads"]) {
    if (t["name"] == name) return t["id"];
  }
  return -1;
}

// 1 ------------------------------------------------------------------------

std::string abs_walkthrough(Checker& c) {
  auto start = Clock::now();
  DapClient client;
  std::string program = data_path("abs.mv");
  client.request("initialize", {{"adapterID", "verdap"}});
  json bp = client.request("setBreakpoints", {{"source", {{"path", program}}}, {"breakpoints", {{{"line", 6}}}}});
  c.expect(bp["body"]["breakpoints"][0]["verified"] == true, "breakpoint on line 6 is verified");
  client.request("launch", {{"program", program}, {"stopOnEntry", true}, {"bruteforceBound", 8}});
  json threads = client.request("threads")["body"];
  c.expect(thread_names(threads) == std::vector<std::string>{"0"}, "one thread \"0\" after launch");

  client.request("next", {{"threadId", thread_id(threads, "0")}});
  threads = client.request("threads")["body"];
  c.expect(thread_names(threads) == std::vector<std::string>{"00", "01"},
           "threads are exactly 00 and 01 after the split, got " + threads.dump());

  int else_branch = thread_id(threads, "01");
  std::size_t mark = client.transcript().size();
  client.request("continue", {{"threadId", else_branch}});
  json stack = client.request("stackTrace", {{"threadId", else_branch}});
  bool stopped_at_bp = false;
  for (const auto& e : client.events("stopped", mark)) {
    stopped_at_bp = stopped_at_bp || (e["body"]["reason"] == "breakpoint" && e["body"]["threadId"] == else_branch);
  }
  c.expect(stopped_at_bp, "continue on 01 stops with reason breakpoint");
  c.expect(stack["body"]["stackFrames"][0]["line"] == 6, "01 is halted on line 6");

  json scopes = client.request("scopes", {{"frameId", stack["body"]["stackFrames"][0]["id"]}});
  json vars = client.request("variables", {{"variablesReference", scopes["body"]["scopes"][0]["variablesReference"]}});
  json state = client.request("variables", {{"variablesReference", scopes["body"]["scopes"][1]["variablesReference"]}});
  std::string x = vars_value(vars, "x");
  bool logic_var = x.size() > 1 && x[0] == 'x' && x.find(' ') == std::string::npos;
  c.expect(logic_var, "x is bound to a logic variable, got " + x);
  c.expect(vars_value(vars, "y") == "−" + x, "y = −" + x + ", got " + vars_value(vars, "y"));
  c.expect(vars_value(state, "path") == "¬(" + x + " > 0)", "path = ¬(" + x + " > 0), got " + vars_value(state, "path"));

  client.request("disconnect");
  c.expect(client.finish() == 0, "adapter exits with status 0");
  double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, "finished in under 1 s (took " + std::to_string(elapsed) + " s)");
  std::ostringstream os;
  os << elapsed << " s";
  return os.str();
}

// 2 ------------------------------------------------------------------------

struct Stepped {
  lang::TranslationUnit unit;
  sem::FreshCounter counter;
  sem::Config before;
  sem::Config after;
  std::uint64_t counter_before = 0;
};

/// Steps the leaf of procedure `proc` `times` times, returning the state
/// around the last step.
Stepped step_program(const std::string& source, std::size_t proc, int times, sem::CallMode mode) {
  Stepped s{parse_or_die(source), {}, sem::Config(sem::Parallel{}), sem::Config(sem::Parallel{}), 0};
  sem::StepContext ctx{s.unit, s.counter, mode};
  sem::Config c = sem::initial_config(s.unit, s.counter);
  sem::Schedule sigma = {proc};
  for (int i = 0; i < times; ++i) {
    s.before = c;
    s.counter_before = s.counter.next();
    c = sem::step(c, sigma, ctx);
  }
  s.after = c;
  return s;
}

std::string step_shapes(Checker& c) {
  using sem::Obligation;
  using sem::Parallel;
  using sem::Sequential;
  int rules = 0;

  {  // assume e: (s, φ ∧ s(e), rest)
    Stepped s = step_program("proc f(x: int): int {\n  assume x > 0;\n  result = 1;\n}\n", 0, 1, sem::CallMode::Contract);
    const auto* before = sem::resolve(s.before, {0}).as<Sequential>();
    const auto* leaf = sem::resolve(s.after, {0}).as<Sequential>();
    c.expect(leaf != nullptr, "assume yields one Sequential");
    if (leaf) {
      c.expect(same_path(leaf->path, {bin(BinaryOp::Gt, lv("x", 0), lit(0))}), "assume path is [x0 > 0], got " + path_text(leaf->path));
      c.expect(leaf->store == before->store, "assume leaves the store alone");
      c.expect(leaf->rest.size() == 1 && leaf->rest[0].loc().line == 3, "assume continues with the rest");
    }
    ++rules;
  }
  {  // assert e: Parallel[(s, φ ∧ s(e), rest), Obligation(φ, ¬s(e))]
    Stepped s = step_program("proc f(x: int): int {\n  assume x < 5;\n  assert x > 0;\n  result = 1;\n}\n", 0, 2, sem::CallMode::Contract);
    const auto* par = sem::resolve(s.after, {0}).as<Parallel>();
    c.expect(par && par->children.size() == 2, "assert yields a Parallel of two");
    if (par && par->children.size() == 2) {
      Expr pre = bin(BinaryOp::Lt, lv("x", 0), lit(5));
      Expr e = bin(BinaryOp::Gt, lv("x", 0), lit(0));
      const auto* cont = par->children[0].as<Sequential>();
      const auto* obl = par->children[1].as<Obligation>();
      c.expect(cont && same_path(cont->path, {pre, e}), "assert continuation path is φ ∧ s(e)");
      c.expect(cont && cont->rest.size() == 1, "assert continuation keeps the rest");
      c.expect(obl && same_path(obl->path, {pre}), "assert obligation keeps φ");
      c.expect(obl && obl->negated == Expr::unary(lang::UnaryOp::Not, e), "assert obligation negates s(e)");
      c.expect(obl && obl->kind == sem::ObligationKind::AssertFailure && obl->at.line == 3,
               "assert obligation is an assertFailure at line 3");
    }
    ++rules;
  }
  {  // x := e: (s[x ↦ s(e)], φ, rest)
    Stepped s = step_program("proc f(x: int): int {\n  result = x + 1;\n  assert result > x;\n}\n", 0, 1, sem::CallMode::Contract);
    const auto* leaf = sem::resolve(s.after, {0}).as<Sequential>();
    c.expect(leaf != nullptr, "assign yields one Sequential");
    if (leaf) {
      c.expect(binding(leaf->store, "result") == bin(BinaryOp::Add, lv("x", 0), lit(1)), "result ↦ x0 + 1");
      c.expect(binding(leaf->store, "x") == lv("x", 0), "x is unchanged");
      c.expect(leaf->path.conjuncts.empty(), "assign leaves the path alone");
      c.expect(leaf->rest.size() == 1, "assign continues with the rest");
    }
    Stepped last = step_program("proc f(x: int): int {\n  result = x;\n}\n", 0, 1, sem::CallMode::Contract);
    c.expect(sem::resolve(last.after, {0}).as<sem::Done>() != nullptr, "assigning the last statement yields Done");
    ++rules;
  }
  {  // if: Parallel[(s, φ ∧ s(e), p1; rest), (s, φ ∧ ¬s(e), p2; rest)]
    Stepped s = step_program(read_text(data_path("abs.mv")), 0, 1, sem::CallMode::Contract);
    const auto* before = sem::resolve(s.before, {0}).as<Sequential>();
    const auto* par = sem::resolve(s.after, {0}).as<Parallel>();
    c.expect(par && par->children.size() == 2, "if yields a Parallel of two");
    if (par && par->children.size() == 2) {
      Expr e = bin(BinaryOp::Gt, lv("x", 0), lit(0));
      const auto* then_leaf = par->children[0].as<Sequential>();
      const auto* else_leaf = par->children[1].as<Sequential>();
      c.expect(then_leaf && same_path(then_leaf->path, {e}), "then path is x0 > 0");
      c.expect(else_leaf && same_path(else_leaf->path, {Expr::unary(lang::UnaryOp::Not, e)}), "else path is ¬(x0 > 0)");
      c.expect(then_leaf && then_leaf->store == before->store && else_leaf && else_leaf->store == before->store,
               "if leaves both stores unchanged");
      // then: result = x; ensures.  else: var y; result = y; ensures.
      c.expect(then_leaf && then_leaf->rest.size() == 2 && else_leaf && else_leaf->rest.size() == 3,
               "branches continue with their body followed by the rest");
    }
    ++rules;
  }
  {  // while: three children with ŝ freshening exactly modifiedVars(body)
    Stepped s = step_program(
        "proc count(n: int) {\n  var i: int = 0;\n  while (i < n) invariant i <= n; {\n    i = i + 1;\n  }\n  assert i == n;\n}\n",
        0, 2, sem::CallMode::Contract);
    const auto* par = sem::resolve(s.after, {0}).as<Parallel>();
    c.expect(par && par->children.size() == 3, "while yields exactly three children");
    c.expect(s.counter.next() == s.counter_before + 1, "while allocates one fresh variable for {i}");
    if (par && par->children.size() == 3) {
      Expr n0 = lv("n", 0);
      Expr i1 = lv("i", s.counter_before);
      const auto* init = par->children[0].as<Obligation>();
      const auto* keep = par->children[1].as<Sequential>();
      const auto* exit = par->children[2].as<Sequential>();
      c.expect(init && init->kind == sem::ObligationKind::InvariantInitFailure && init->path.conjuncts.empty() &&
                   init->negated == Expr::unary(lang::UnaryOp::Not, bin(BinaryOp::Le, lit(0), n0)),
               "first child is the invariant-init obligation ¬(0 ≤ n0)");
      Expr cond = bin(BinaryOp::Lt, i1, n0);
      Expr inv = bin(BinaryOp::Le, i1, n0);
      c.expect(keep && same_path(keep->path, {cond, inv}), "preserve path is ŝ(e) ∧ ŝ(I)");
      c.expect(exit && same_path(exit->path, {Expr::unary(lang::UnaryOp::Not, cond), inv}), "exit path is ¬ŝ(e) ∧ ŝ(I)");
      for (const auto* leaf : {keep, exit}) {
        if (!leaf) continue;
        c.expect(binding(leaf->store, "i") == i1, "i is freshened");
        c.expect(binding(leaf->store, "n") == n0, "n is not freshened");
      }
      if (keep) {
        const auto* tail = std::get_if<lang::Assert>(&keep->rest.back().node().kind);
        c.expect(keep->rest.size() == 2 && tail && lang::to_string(tail->cond) == "i <= n" &&
                     tail->origin == lang::AssertOrigin::Invariant,
                 "preserve branch runs the body then assert i <= n");
      }
      c.expect(exit && exit->rest.size() == 1, "exit branch continues after the loop");
    }
    c.expect(lang::modified_vars(std::get<lang::While>(sem::resolve(s.before, {0}).as<Sequential>()->rest[0].node().kind).body) ==
                 std::set<std::string>{"i"},
             "modifiedVars(body) = {i}");
    ++rules;
  }
  const std::string calls =
      "proc inc(a: int): int\n  requires a >= 0;\n  ensures result == a + 1;\n{\n  result = a + 1;\n}\n"
      "proc m(x: int): int {\n  result = inc(x);\n  assert result > 0;\n}\n";
  {  // contract call: Parallel[Obligation(φ, ¬P[a ↦ x]), (s[r ↦ ρ], φ ∧ Q[a ↦ x, result ↦ ρ], rest)]
    Stepped s = step_program(calls, 1, 1, sem::CallMode::Contract);
    const auto* par = sem::resolve(s.after, {1}).as<Parallel>();
    c.expect(par && par->children.size() == 2, "contract call yields a Parallel of two");
    c.expect(s.counter.next() == s.counter_before + 1, "contract call allocates exactly one fresh result");
    if (par && par->children.size() == 2) {
      Expr x = lv("x", 1);
      Expr rho = lv("result", s.counter_before);
      const auto* pre = par->children[0].as<Obligation>();
      const auto* cont = par->children[1].as<Sequential>();
      c.expect(pre && pre->kind == sem::ObligationKind::PreconditionFailure && pre->path.conjuncts.empty() &&
                   pre->negated == Expr::unary(lang::UnaryOp::Not, bin(BinaryOp::Ge, x, lit(0))),
               "precondition obligation is ¬(x1 ≥ 0)");
      c.expect(cont && binding(cont->store, "result") == rho, "result is bound to the fresh ρ");
      c.expect(cont && same_path(cont->path, {bin(BinaryOp::Eq, rho, bin(BinaryOp::Add, x, lit(1)))}),
               "continuation assumes the postcondition, got " + (cont ? path_text(cont->path) : std::string()));
      c.expect(cont && cont->rest.size() == 1, "contract call continues with the rest");
    }
    ++rules;
  }
  {  // inline call: callee body under a new frame and scope, then assert Q and return
    Stepped s = step_program(calls, 1, 1, sem::CallMode::Inline);
    const auto* leaf = sem::resolve(s.after, {1}).as<Sequential>();
    c.expect(leaf != nullptr, "inline call yields one Sequential");
    c.expect(s.counter.next() == s.counter_before, "inline call allocates nothing");
    if (leaf) {
      c.expect(leaf->frames.size() == 2 && leaf->frames[1].proc_name == "inc" && leaf->frames[1].call_site &&
                   leaf->frames[1].call_site->line == 8,
               "a frame for inc called from line 8 is pushed");
      c.expect(leaf->store.depth() == 3 && binding(leaf->store, "a") == lv("x", 1), "the new scope binds a ↦ x1");
      c.expect(leaf->path.conjuncts.empty(), "inline call leaves the path alone");
      // result = a + 1; assert ensures; return; assert result > 0
      c.expect(leaf->rest.size() == 4, "rest is body, ensures check, return, caller rest");
      if (leaf->rest.size() == 4) {
        const auto* post = std::get_if<lang::Assert>(&leaf->rest[1].node().kind);
        c.expect(post && post->origin == lang::AssertOrigin::Ensures, "callee ensures is checked on return");
      }
    }
    // Run the callee to its return and check the caller sees the result.
    lang::TranslationUnit unit = parse_or_die(calls);
    sem::FreshCounter counter;
    sem::StepContext ctx{unit, counter, sem::CallMode::Inline};
    sem::Config cfg = sem::step(sem::initial_config(unit, counter), {1}, ctx);
    cfg = sem::step(cfg, {1}, ctx);      // result = a + 1
    cfg = sem::step(cfg, {1}, ctx);      // assert ensures
    cfg = sem::step(cfg, {1, 0}, ctx);   // return
    const auto* back = sem::resolve(cfg, {1, 0}).as<Sequential>();
    c.expect(back && back->frames.size() == 1 && back->store.depth() == 2, "return pops the frame and scope");
    c.expect(back && binding(back->store, "result") == bin(BinaryOp::Add, lv("x", 1), lit(1)), "result ↦ x1 + 1 after return");
    ++rules;
  }
  return std::to_string(rules) + " rules";
}

// 3, 4 ----------------------------------------------------------------------

std::vector<std::string> corpus() {
  ProgramGenerator gen(20240611);
  std::vector<std::string> out;
  for (int i = 0; i < 40; ++i) out.push_back(gen.next());
  return out;
}

std::string concrete_soundness(Checker& c) {
  auto start = Clock::now();
  std::size_t runs = 0;
  for (const auto& src : corpus()) {
    AuditReport r = audit_concrete_soundness(parse_or_die(src), -2, 2);
    runs += r.checks;
    for (const auto& v : r.violations) c.expect(false, v + "\n" + src);
  }
  double elapsed = seconds_since(start);
  c.expect(elapsed < 30.0, "finished in under 30 s (took " + std::to_string(elapsed) + " s)");
  std::ostringstream os;
  os << corpus().size() << " programs, " << runs << " concrete runs, " << elapsed << " s";
  return os.str();
}

std::string prune_soundness(Checker& c) {
  std::size_t checks = 0;
  for (const auto& src : corpus()) {
    solve::BruteForceSolver solver(8);
    AuditReport r = audit_prune(parse_or_die(src), solver, -10, 10);
    checks += r.checks;
    for (const auto& v : r.violations) c.expect(false, v + "\n" + src);
  }
  return std::to_string(checks) + " pruning decisions checked";
}

// 5 ------------------------------------------------------------------------

driver::VerifyReport verify_file(const std::string& name) {
  driver::VerifyOptions options;
  options.solver = solve::SolverConfig::bruteforce(8);
  auto outcome = driver::verify_source(read_text(data_path(name)), data_path(name), options);
  if (!outcome.report) throw std::runtime_error(name + " does not parse");
  return *outcome.report;
}

bool all_discharged(const driver::ProcedureReport& p) {
  for (const auto& o : p.obligations) {
    if (o.status != sem::ObligationStatus::Kind::Open) return false;
  }
  return true;
}

std::string verdicts(Checker& c) {
  for (const char* name : {"abs.mv", "divide.mv", "count.mv"}) {
    driver::VerifyReport r = verify_file(name);
    c.expect(r.exit_code() == 0, std::string(name) + " exits 0");
    for (const auto& p : r.procedures) {
      c.expect(p.verdict == driver::Verdict::Verified && all_discharged(p), std::string(name) + ": " + p.name + " is verified");
    }
  }
  driver::VerifyReport divide = verify_file("divide.mv");
  bool division_checked = false;
  for (const auto& o : divide.procedures.at(0).obligations) {
    division_checked = division_checked || o.kind == sem::ObligationKind::DivisionByZero;
  }
  c.expect(division_checked, "divide.mv discharges a division obligation");

  driver::VerifyReport count = verify_file("count.mv");
  const auto& loop = count.procedures.at(0);
  c.expect(loop.obligations.size() == 3, "count.mv has 3 obligations, got " + std::to_string(loop.obligations.size()));
  if (loop.obligations.size() == 3) {
    c.expect(loop.obligations[0].kind == sem::ObligationKind::InvariantInitFailure &&
                 loop.obligations[1].kind == sem::ObligationKind::InvariantPreserveFailure &&
                 loop.obligations[2].kind == sem::ObligationKind::AssertFailure,
             "count.mv obligations are invariant-init, invariant-preserve, assert");
  }

  // Independent oracle for the countermodel: run abs_wrong concretely.
  lang::TranslationUnit wrong_unit = load_unit("abs_wrong.mv");
  std::vector<int> failing;
  for (int x = -8; x <= 8; ++x) {
    ConcreteOutcome o = run_concrete(wrong_unit.procedures[0], {{"x", lang::BigInt(x)}});
    if (o.kind == ConcreteOutcome::Kind::Failed) failing.push_back(x);
  }
  c.expect(failing == std::vector<int>{0}, "the reference interpreter fails abs_wrong only at x = 0");

  driver::VerifyReport wrong = verify_file("abs_wrong.mv");
  c.expect(wrong.exit_code() == 1, "abs_wrong.mv exits 1");
  const auto& p = wrong.procedures.at(0);
  c.expect(p.verdict == driver::Verdict::Failed, "abs_wrong is failed");
  bool model_ok = false;
  for (const auto& o : p.obligations) {
    if (o.status != sem::ObligationStatus::Kind::Failed || !o.countermodel) continue;
    c.expect(o.kind == sem::ObligationKind::PostconditionFailure && o.at.line == 2, "the failure is the ensures on line 2");
    if (o.countermodel->size() == 1) {
      const auto& [key, value] = *o.countermodel->begin();
      model_ok = key.name == "x" && value == lang::Value(lang::BigInt(failing.empty() ? 99 : failing[0]));
    }
  }
  c.expect(model_ok, "countermodel is x₀ = 0");

  auto cli = [&](const std::string& file) {
    return solve::run_process({adapter_path(), "verify", "--bruteforce", "8", data_path(file)}, "",
                              std::chrono::seconds(20));
  };
  auto ok = cli("abs.mv");
  c.expect(ok.exit_code == 0 && ok.out.find("abs: verified") != std::string::npos, "verdap verify abs.mv prints verified, exits 0");
  auto bad = cli("abs_wrong.mv");
  c.expect(bad.exit_code == 1 && bad.out.find("abs: failed (ensures, line 2)") != std::string::npos &&
               bad.out.find("x₀ = 0") != std::string::npos,
           "verdap verify abs_wrong.mv reports x₀ = 0, exits 1; got:\n" + bad.out);
  return "4 programs";
}

// 6, 8 -----------------------------------------------------------------------

std::string golden(Checker& c, const json& launch_extra, const std::string& file, bool missing_solver) {
  ScenarioResult r = run_golden_scenario(launch_extra);
  c.expect(r.exit_code == 0, "adapter exits 0, got " + std::to_string(r.exit_code));
  c.expect(r.all_succeeded, "every request succeeds");
  c.expect(r.threads_after == r.threads_before, "stepBack restores the threads list: " + r.threads_before.dump() +
                                                    " vs " + r.threads_after.dump());
  GoldenCheck g = compare_golden(normalize_transcript(r.transcript), file);
  c.expect(g.ok, g.detail);
  std::string result = r.evaluate.value("body", json::object()).value("result", "");
  if (missing_solver) {
    c.expect(result.size() >= 9 && result.compare(result.size() - 9, 9, "[unknown]") == 0,
             "evaluate reports [unknown], got " + result);
    for (const auto& m : r.transcript) {
      if (m.value("type", "") != "response" || m.value("command", "") != "threads") continue;
      for (const auto& t : m["body"]["threads"]) {
        std::string name = t["name"];
        c.expect(name.find("✗") == std::string::npos, "no obligation is reported failed without a solver");
      }
    }
    auto cli = solve::run_process({adapter_path(), "verify", "--solver", "verdap-no-such-solver", data_path("abs.mv")},
                                  "", std::chrono::seconds(20));
    c.expect(cli.exit_code == 1 && cli.out.find("abs: unknown") != std::string::npos,
             "verify without a solver reports unknown, got:\n" + cli.out + cli.err);
  } else {
    c.expect(result == "x₀ ≤ 0 [valid under path]", "evaluate x <= 0 on 01, got " + result);
  }
  return std::to_string(r.transcript.size()) + " messages";
}

// 7 ------------------------------------------------------------------------

class Driver {
public:
  explicit Driver(const std::string& program) {
    send("initialize", {{"adapterID", "verdap"}});
    send("launch", {{"program", program}, {"bruteforceBound", 8}});
  }

  std::vector<json> send(const std::string& command, json args = json::object()) {
    return session_.handle({{"seq", seq_++}, {"type", "request"}, {"command", command}, {"arguments", std::move(args)}});
  }

  static bool succeeded(const std::vector<json>& out) {
    for (const auto& m : out) {
      if (m["type"] == "response") return m["success"];
    }
    return false;
  }

  int id_of(const std::string& name) const {
    for (const auto& t : session_.threads()) {
      if (t.name() == name) return t.id;
    }
    return -1;
  }

  std::vector<std::string> branch_names() const {
    std::vector<std::string> out;
    for (const auto& t : session_.threads()) {
      if (t.kind == dap::ThreadEntry::Kind::Branch) out.push_back(t.name());
    }
    return out;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& t : session_.threads()) out.push_back(t.name());
    return out;
  }

  dap::DebugSession& session() { return session_; }

private:
  dap::DebugSession session_;
  int seq_ = 1;
};

std::string inversion(Checker& c) {
  const std::vector<std::string> programs = {"abs.mv", "abs_wrong.mv", "count.mv", "divide.mv", "calls.mv", "sum.mv"};
  const std::vector<std::string> commands = {"next", "stepIn", "continue"};
  std::mt19937 rng(7);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  std::size_t requests = 0;
  std::size_t undos = 0;
  const int sequences = 240;
  for (int seqn = 0; seqn < sequences; ++seqn) {
    std::string program = data_path(programs[pick(programs.size())]);
    Driver live(program);
    struct Snap {
      std::string dump;
      std::vector<std::string> names;
    };
    std::vector<Snap> snaps;
    std::vector<std::pair<std::string, std::string>> net;
    int length = 1 + static_cast<int>(pick(15));
    for (int k = 0; k < length; ++k) {
      std::vector<std::string> branches = live.branch_names();
      bool back = !snaps.empty() && (branches.empty() || pick(3) == 0);
      if (!back && branches.empty()) break;
      ++requests;
      if (back) {
        ++undos;
        auto out = live.send("stepBack", {{"threadId", 1}});
        c.expect(Driver::succeeded(out), "stepBack succeeds");
        c.expect(sem::dump(live.session().current()) == snaps.back().dump,
                 "stepBack restores the configuration in " + program);
        c.expect(live.names() == snaps.back().names, "stepBack restores the thread names in " + program);
        snaps.pop_back();
        net.pop_back();
        continue;
      }
      std::string name = branches[pick(branches.size())];
      std::string command = commands[pick(commands.size())];
      snaps.push_back({sem::dump(live.session().current()), live.names()});
      auto out = live.send(command, {{"threadId", live.id_of(name)}});
      c.expect(Driver::succeeded(out), command + " on " + name + " succeeds in " + program);
      net.emplace_back(command, name);
    }

    Driver replay(program);
    for (const auto& [command, name] : net) replay.send(command, {{"threadId", replay.id_of(name)}});
    c.expect(sem::dump(live.session().current(), true) == sem::dump(replay.session().current(), true),
             "replaying the net requests reproduces the configuration in " + program);
    c.expect(live.names() == replay.names(), "replaying the net requests reproduces the threads in " + program);
  }
  return std::to_string(sequences) + " sequences, " + std::to_string(requests) + " requests, " +
         std::to_string(undos) + " step-backs";
}

struct Criterion {
  const char* title;
  std::function<std::string(Checker&)> run;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"abs split walkthrough", abs_walkthrough},
      {"step-rule shapes", step_shapes},
      {"concrete soundness", concrete_soundness},
      {"prune soundness", prune_soundness},
      {"verification verdicts", verdicts},
      {"DAP transcript golden",
       [](Checker& c) { return golden(c, {{"bruteforceBound", 8}}, "abs_session.transcript", false); }},
      {"step/stepBack inversion", inversion},
      {"solver fallback",
       [](Checker& c) {
         return golden(c, {{"solver", "verdap-no-such-solver"}}, "abs_session_no_solver.transcript", true);
       }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checker c;
    std::string note;
    try {
      note = criteria[i].run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s [%zu] %s", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].title);
    if (!note.empty()) std::printf(" (%s)", note.c_str());
    if (!c.ok()) std::printf("%s", c.summary().c_str());
    std::printf("\n");
    std::fflush(stdout);
    failed += c.ok() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
