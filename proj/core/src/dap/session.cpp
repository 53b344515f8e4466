#include "verdap/dap/session.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "verdap/lang/parser.hpp"

namespace verdap::dap {

namespace {

using sem::Config;
using sem::Schedule;
using lang::Expr;

/// Raised inside handlers to produce a failed response.
class RequestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string base_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

json variable(const std::string& name, const std::string& value, const char* type = nullptr) {
  json v = {{"name", name}, {"value", value}, {"variablesReference", 0}};
  if (type) v["type"] = type;
  return v;
}

const json& arguments(const json& req) {
  static const json empty = json::object();
  auto it = req.find("arguments");
  if (it == req.end() || !it->is_object()) return empty;
  return *it;
}

std::string model_text(const lang::Model& m) {
  return m.empty() ? std::string("any input") : lang::to_display(m);
}

} // namespace

std::string ThreadEntry::name() const {
  std::string out = sem::thread_name(schedule);
  if (kind == Kind::Failed) out += "✗";
  if (kind == Kind::Unknown) out += "?";
  return out;
}

std::string canonical_path(const std::string& path) {
  std::error_code ec;
  auto p = std::filesystem::weakly_canonical(std::filesystem::path(path), ec);
  return ec ? path : p.string();
}

DebugSession::DebugSession() : current_(sem::Parallel{}) {}
DebugSession::~DebugSession() = default;

json DebugSession::response(const json& request, bool success, json body, const std::string& message) {
  json r = {{"seq", seq_++},
            {"type", "response"},
            {"request_seq", request.value("seq", 0)},
            {"success", success},
            {"command", request.value("command", std::string())}};
  if (!success) r["message"] = message;
  if (!body.is_null()) r["body"] = std::move(body);
  return r;
}

json DebugSession::event(const std::string& name, json body) {
  return json{{"seq", seq_++}, {"type", "event"}, {"event", name}, {"body", std::move(body)}};
}

std::vector<json> DebugSession::handle(const json& request) {
  std::vector<json> out;
  if (!request.is_object() || request.value("type", std::string()) != "request" ||
      !request.contains("command") || !request["command"].is_string()) {
    out.push_back(response(request.is_object() ? request : json::object(), false, nullptr,
                           "malformed request"));
    return out;
  }
  const std::string command = request["command"];
  try {
    if (command == "initialize") {
      on_initialize(request, out);
    } else if (command == "launch") {
      on_launch(request, out);
    } else if (command == "setBreakpoints") {
      on_set_breakpoints(request, out);
    } else if (command == "configurationDone") {
      out.push_back(response(request, true));
    } else if (command == "threads") {
      on_threads(request, out);
    } else if (command == "stackTrace") {
      on_stack_trace(request, out);
    } else if (command == "scopes") {
      on_scopes(request, out);
    } else if (command == "variables") {
      on_variables(request, out);
    } else if (command == "next") {
      on_step(request, out, sem::CallMode::Contract);
    } else if (command == "stepIn") {
      on_step(request, out, sem::CallMode::Inline);
    } else if (command == "continue") {
      on_continue(request, out);
    } else if (command == "stepBack") {
      on_step_back(request, out);
    } else if (command == "evaluate") {
      on_evaluate(request, out);
    } else if (command == "disconnect") {
      disconnected_ = true;
      out.push_back(response(request, true));
    } else {
      out.push_back(response(request, false, nullptr, "unsupported request '" + command + "'"));
    }
  } catch (const RequestError& e) {
    out.push_back(response(request, false, nullptr, e.what()));
  } catch (const json::exception& e) {
    out.push_back(response(request, false, nullptr, std::string("bad arguments: ") + e.what()));
  } catch (const sem::NotSteppable& e) {
    out.push_back(response(request, false, nullptr, e.what()));
  } catch (const sem::InvalidSchedule& e) {
    out.push_back(response(request, false, nullptr, e.what()));
  } catch (const sem::UnboundVariable& e) {
    out.push_back(response(request, false, nullptr, e.what()));
  }
  return out;
}

void DebugSession::on_initialize(const json& req, std::vector<json>& out) {
  json caps = {
      {"supportsConfigurationDoneRequest", true},
      {"supportsStepBack", true},
      {"supportsEvaluateForHovers", true},
      {"supportsFunctionBreakpoints", false},
      {"supportsConditionalBreakpoints", false},
      {"supportsHitConditionalBreakpoints", false},
      {"supportsSetVariable", false},
      {"supportsRestartRequest", false},
      {"supportsTerminateRequest", false},
      {"exceptionBreakpointFilters", json::array()},
  };
  out.push_back(response(req, true, caps));
}

void DebugSession::on_launch(const json& req, std::vector<json>& out) {
  if (unit_) throw RequestError("already launched");
  const json& args = arguments(req);
  if (!args.contains("program") || !args["program"].is_string()) {
    throw RequestError("launch requires a 'program' path");
  }
  const std::string program = args["program"];
  auto source = read_file(program);
  if (!source) throw RequestError("cannot read '" + program + "'");
  lang::ParseResult parsed = lang::parse_program(*source, program);
  if (!parsed.ok()) {
    std::string msg;
    for (const auto& d : parsed.diagnostics) {
      if (!msg.empty()) msg += '\n';
      msg += lang::to_string(d);
    }
    throw RequestError(msg);
  }

  if (args.contains("solver") && args["solver"].is_string()) {
    solver_cfg_ = solve::SolverConfig::external(args["solver"].get<std::string>());
  } else if (args.contains("bruteforceBound")) {
    solver_cfg_ = solve::SolverConfig::bruteforce(args["bruteforceBound"].get<int>());
  } else if (const char* env = std::getenv("VERDAP_SOLVER"); env && *env) {
    solver_cfg_ = solve::SolverConfig::external(env);
  }
  if (args.contains("timeoutMs")) solver_cfg_.timeout = std::chrono::milliseconds(args["timeoutMs"].get<int>());
  solver_ = solve::make_solver(solver_cfg_);

  unit_ = std::move(*parsed.unit);
  program_ = program;
  current_ = sem::prune(sem::initial_config(*unit_, counter_), *solver_).config;

  out.push_back(response(req, true));
  out.push_back(event("initialized"));
  std::vector<ThreadEntry> next = reconcile({});
  registry_.clear();
  transition(std::move(next), out, "entry", {}, true);
}

std::string DebugSession::program_path() const { return canonical_path(program_); }

std::set<int> DebugSession::breakpoint_lines() const {
  auto it = breakpoints_.find(program_path());
  if (it == breakpoints_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void DebugSession::on_set_breakpoints(const json& req, std::vector<json>& out) {
  const json& args = arguments(req);
  std::string path = args.at("source").value("path", std::string());
  std::vector<int> lines;
  if (args.contains("breakpoints")) {
    for (const auto& bp : args["breakpoints"]) lines.push_back(bp.at("line").get<int>());
  } else if (args.contains("lines")) {
    for (const auto& l : args["lines"]) lines.push_back(l.get<int>());
  }
  std::string key = canonical_path(path);
  breakpoints_[key] = lines;

  std::set<int> statements;
  if (unit_ && key == program_path()) {
    statements = lang::statement_lines(*unit_);
  } else if (auto source = read_file(path)) {
    lang::ParseResult parsed = lang::parse_program(*source, path);
    if (parsed.ok()) statements = lang::statement_lines(*parsed.unit);
  }
  json bps = json::array();
  for (int line : lines) {
    json bp = {{"verified", statements.count(line) > 0}, {"line", line}};
    if (!statements.count(line)) bp["message"] = "no statement starts on this line";
    bps.push_back(std::move(bp));
  }
  out.push_back(response(req, true, json{{"breakpoints", bps}}));
}

void DebugSession::on_threads(const json& req, std::vector<json>& out) {
  json threads = json::array();
  for (const auto& t : registry_) threads.push_back({{"id", t.id}, {"name", t.name()}});
  out.push_back(response(req, true, json{{"threads", threads}}));
}

const ThreadEntry* DebugSession::find_thread(int id) const {
  for (const auto& t : registry_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const ThreadEntry& DebugSession::thread(const json& args) const {
  if (!unit_) throw RequestError("not launched");
  int id = args.at("threadId").get<int>();
  const ThreadEntry* t = find_thread(id);
  if (!t) throw RequestError("unknown thread " + std::to_string(id));
  return *t;
}

void DebugSession::on_stack_trace(const json& req, std::vector<json>& out) {
  const ThreadEntry& t = thread(arguments(req));
  const Config& leaf = sem::resolve(current_, t.schedule);
  json source = {{"name", base_name(program_)}, {"path", program_}};
  json frames = json::array();
  auto add = [&](std::size_t frame, const std::string& name, const sem::SourceLoc& loc) {
    frames_.push_back(FrameRef{t.schedule, frame});
    frames.push_back({{"id", static_cast<int>(frames_.size())},
                      {"name", name},
                      {"line", loc.line},
                      {"column", loc.column},
                      {"source", source}});
  };
  if (const auto* s = leaf.as<sem::Sequential>()) {
    for (std::size_t k = s->frames.size(); k-- > 0;) {
      const sem::SourceLoc& loc =
          k + 1 == s->frames.size() ? s->rest.front().loc() : *s->frames[k + 1].call_site;
      add(k, s->frames[k].proc_name, loc);
    }
  } else if (const auto* o = leaf.as<sem::Obligation>()) {
    add(0, o->procedure + " (" + sem::kind_name(o->kind) + ")", o->at);
  }
  out.push_back(response(req, true, json{{"stackFrames", frames}, {"totalFrames", frames.size()}}));
}

void DebugSession::on_scopes(const json& req, std::vector<json>& out) {
  int id = arguments(req).at("frameId").get<int>();
  if (id < 1 || static_cast<std::size_t>(id) > frames_.size()) {
    throw RequestError("unknown frame " + std::to_string(id));
  }
  FrameRef f = frames_[static_cast<std::size_t>(id) - 1];
  const Config& leaf = sem::resolve(current_, f.schedule);
  json scopes = json::array();
  auto add = [&](const char* name, bool state) {
    var_refs_.push_back(VarRef{f.schedule, f.frame, state});
    scopes.push_back({{"name", name},
                      {"variablesReference", static_cast<int>(var_refs_.size())},
                      {"expensive", false}});
  };
  if (const auto* s = leaf.as<sem::Sequential>()) {
    add("Vars", false);
    if (f.frame + 1 == s->frames.size()) add("State", true);
  } else {
    add("State", true);
  }
  out.push_back(response(req, true, json{{"scopes", scopes}}));
}

void DebugSession::on_variables(const json& req, std::vector<json>& out) {
  int id = arguments(req).at("variablesReference").get<int>();
  if (id < 1 || static_cast<std::size_t>(id) > var_refs_.size()) {
    throw RequestError("unknown variables reference " + std::to_string(id));
  }
  VarRef ref = var_refs_[static_cast<std::size_t>(id) - 1];
  const Config& leaf = sem::resolve(current_, ref.schedule);
  json vars = json::array();

  if (const auto* s = leaf.as<sem::Sequential>()) {
    if (!ref.state) {
      const auto& scopes = s->store.scopes();
      std::set<std::string> shown;
      for (const auto& b : scopes.at(s->frames[ref.frame].local_scope_depth)) {
        vars.push_back(variable(b.name, lang::to_display(b.value), lang::sort_name(b.sort)));
        shown.insert(b.name);
      }
      for (const auto& b : scopes.front()) {
        if (shown.count(b.name)) continue;
        vars.push_back(variable(b.name, lang::to_display(b.value), lang::sort_name(b.sort)));
      }
    } else {
      std::size_t obligations = 0;
      for (const auto& sched : sem::leaf_schedules(current_)) {
        if (sem::resolve(current_, sched).as<sem::Obligation>()) ++obligations;
      }
      vars.push_back(variable("path", s->path.render()));
      vars.push_back(variable("obligations", std::to_string(obligations)));
    }
  } else if (const auto* o = leaf.as<sem::Obligation>()) {
    vars.push_back(variable("kind", sem::kind_description(o->kind)));
    vars.push_back(variable("path", o->path.render()));
    vars.push_back(variable("negated", lang::to_display(o->negated)));
    vars.push_back(variable("status", sem::status_name(o->status.kind)));
    if (o->status.model) {
      for (const auto& [key, value] : *o->status.model) {
        vars.push_back(variable(lang::display_name(key), lang::to_display(value)));
      }
    }
    if (!o->status.note.empty()) vars.push_back(variable("note", o->status.note));
  }
  out.push_back(response(req, true, json{{"variables", vars}}));
}

std::vector<ThreadEntry> DebugSession::reconcile(const std::map<Schedule, Schedule>& moved) {
  std::map<Schedule, const ThreadEntry*> carried;
  for (const auto& e : registry_) {
    auto it = moved.find(e.schedule);
    if (it != moved.end()) carried[it->second] = &e;
  }
  std::vector<ThreadEntry> next;
  for (const auto& sched : sem::leaf_schedules(current_)) {
    const Config& leaf = sem::resolve(current_, sched);
    ThreadEntry e;
    e.schedule = sched;
    e.leaf = leaf.identity();
    if (leaf.as<sem::Sequential>()) {
      e.kind = ThreadEntry::Kind::Branch;
    } else if (const auto* o = leaf.as<sem::Obligation>();
               o && o->status.kind != sem::ObligationStatus::Kind::Open) {
      e.kind = o->status.kind == sem::ObligationStatus::Kind::Failed ? ThreadEntry::Kind::Failed
                                                                     : ThreadEntry::Kind::Unknown;
    } else {
      continue;
    }
    auto it = carried.find(sched);
    e.id = it != carried.end() && it->second->kind == e.kind ? it->second->id : next_thread_id_++;
    next.push_back(e);
  }
  return next;
}

void DebugSession::transition(std::vector<ThreadEntry> next, std::vector<json>& out,
                              const std::string& stop_reason,
                              const std::set<Schedule>& breakpoint_hits, bool report_obligations) {
  std::map<int, const ThreadEntry*> before;
  for (const auto& e : registry_) before[e.id] = &e;
  std::set<int> after;
  for (const auto& e : next) after.insert(e.id);

  for (const auto& e : registry_) {
    if (!after.count(e.id)) out.push_back(event("thread", {{"reason", "exited"}, {"threadId", e.id}}));
  }
  for (const auto& e : next) {
    if (!before.count(e.id)) out.push_back(event("thread", {{"reason", "started"}, {"threadId", e.id}}));
  }
  if (report_obligations) {
    for (const auto& e : next) {
      if (e.kind == ThreadEntry::Kind::Branch || before.count(e.id)) continue;
      const auto& o = *sem::resolve(current_, e.schedule).as<sem::Obligation>();
      std::string text = o.procedure + ": " + sem::kind_description(o.kind) + " at " +
                         base_name(o.at.file) + ":" + std::to_string(o.at.line);
      if (o.status.model) {
        text += " (counterexample: " + model_text(*o.status.model) + ")";
      } else {
        text += " (undecided: " + (o.status.note.empty() ? std::string("unknown") : o.status.note) + ")";
      }
      out.push_back(event("output", {{"category", "stderr"}, {"output", text + "\n"}}));
    }
  }
  for (const auto& e : next) {
    auto it = before.find(e.id);
    if (it != before.end() && it->second->leaf == e.leaf) continue;
    std::string reason = stop_reason;
    if (e.kind != ThreadEntry::Kind::Branch) {
      reason = "exception";
    } else if (breakpoint_hits.count(e.schedule)) {
      reason = "breakpoint";
    }
    json body = {{"reason", reason}, {"threadId", e.id}, {"allThreadsStopped", false}};
    if (e.kind != ThreadEntry::Kind::Branch) {
      const auto& o = *sem::resolve(current_, e.schedule).as<sem::Obligation>();
      body["description"] = sem::kind_description(o.kind);
    }
    out.push_back(event("stopped", std::move(body)));
  }

  registry_ = std::move(next);
  if (registry_.empty() && !terminated_) {
    out.push_back(event("terminated"));
    out.push_back(event("exited", {{"exitCode", 0}}));
    terminated_ = true;
  } else if (!registry_.empty()) {
    terminated_ = false;
  }
  reset_handles();
}

void DebugSession::reset_handles() {
  frames_.clear();
  var_refs_.clear();
}

void DebugSession::on_step(const json& req, std::vector<json>& out, sem::CallMode mode) {
  const ThreadEntry& t = thread(arguments(req));
  if (t.kind != ThreadEntry::Kind::Branch) throw RequestError("thread " + t.name() + " cannot step");
  Schedule sigma = t.schedule;
  sem::StepContext ctx{*unit_, counter_, mode};
  Config stepped = sem::step(current_, sigma, ctx);
  sem::PruneResult pr = sem::prune(stepped, *solver_);

  history_.push_back(Snapshot{current_, registry_});
  current_ = pr.config;
  std::vector<ThreadEntry> next = reconcile(pr.moved);
  out.push_back(response(req, true));
  transition(std::move(next), out, "step", {}, true);
}

void DebugSession::on_continue(const json& req, std::vector<json>& out) {
  const ThreadEntry& t = thread(arguments(req));
  if (t.kind != ThreadEntry::Kind::Branch) throw RequestError("thread " + t.name() + " cannot step");
  Schedule sigma = t.schedule;
  sem::StepContext ctx{*unit_, counter_, sem::CallMode::Contract};
  sem::RunResult run = sem::run_to_break(current_, sigma, breakpoint_lines(), *solver_, ctx);

  history_.push_back(Snapshot{current_, registry_});
  current_ = run.config;
  std::map<Schedule, Schedule> moved = run.moved;
  for (const auto& s : run.threads) {
    if (s == sigma) moved[sigma] = sigma;
  }
  std::set<Schedule> hits;
  if (run.reason == sem::StopReason::Breakpoint) hits.insert(run.threads.begin(), run.threads.end());
  std::vector<ThreadEntry> next = reconcile(moved);
  out.push_back(response(req, true, json{{"allThreadsContinued", false}}));
  transition(std::move(next), out, run.reason == sem::StopReason::FuelExhausted ? "pause" : "step",
             hits, true);
}

void DebugSession::on_step_back(const json& req, std::vector<json>& out) {
  if (!unit_) throw RequestError("not launched");
  if (history_.empty()) throw RequestError("nothing to undo");
  Snapshot snap = std::move(history_.back());
  history_.pop_back();
  current_ = snap.config;
  out.push_back(response(req, true));
  transition(std::move(snap.registry), out, "step", {}, false);
}

void DebugSession::on_evaluate(const json& req, std::vector<json>& out) {
  if (!unit_) throw RequestError("not launched");
  const json& args = arguments(req);
  std::string text = args.at("expression").get<std::string>();

  Schedule sched;
  std::optional<std::size_t> frame;
  if (args.contains("frameId")) {
    int id = args["frameId"].get<int>();
    if (id < 1 || static_cast<std::size_t>(id) > frames_.size()) {
      throw RequestError("unknown frame " + std::to_string(id));
    }
    sched = frames_[static_cast<std::size_t>(id) - 1].schedule;
    frame = frames_[static_cast<std::size_t>(id) - 1].frame;
  } else if (args.contains("threadId")) {
    sched = thread(args).schedule;
  } else {
    auto all = sem::schedules(current_);
    if (all.empty()) throw RequestError("no thread to evaluate in");
    sched = all.front();
  }
  const auto* leaf = sem::resolve(current_, sched).as<sem::Sequential>();
  if (!leaf) throw RequestError("evaluation needs a branch thread");

  sem::SymbolicStore store = leaf->store;
  if (frame) {
    while (store.depth() > leaf->frames[*frame].local_scope_depth + 1) store.pop_scope();
  }
  lang::ExprParseResult parsed = lang::parse_expression(text, [&](const std::string& name) {
    const sem::Binding* b = store.lookup(name);
    return b ? std::optional<lang::Sort>(b->sort) : std::nullopt;
  });
  if (!parsed.expr) {
    std::string msg;
    for (const auto& d : parsed.diagnostics) {
      if (!msg.empty()) msg += '\n';
      msg += d.message;
    }
    throw RequestError(msg);
  }
  Expr value = sem::substitute(store, *parsed.expr);
  std::string result = lang::to_display(value);
  if (value.sort() == lang::Sort::Bool) {
    solve::EntailResult r = solve::entails(*solver_, leaf->path.conjuncts, value);
    switch (r.verdict) {
    case solve::Entailment::Valid: result += " [valid under path]"; break;
    case solve::Entailment::Invalid:
      result += r.countermodel && !r.countermodel->empty()
                    ? " [invalid: " + lang::to_display(*r.countermodel) + "]"
                    : std::string(" [invalid]");
      break;
    case solve::Entailment::Unknown: result += " [unknown]"; break;
    }
  } else if (!lang::free_logic_vars(value).empty()) {
    std::vector<Expr> query = leaf->path.conjuncts;
    query.push_back(Expr::binary(lang::BinaryOp::Eq, value, value));
    solve::SatResult r = solve::check_sat_or_unknown(*solver_, lang::conjunction(query));
    if (r.verdict == solve::Verdict::Sat) {
      result += " [e.g. " + lang::to_display(lang::evaluate(value, *r.model)) + " with " +
                lang::to_display(*r.model) + "]";
    } else {
      result += " [unknown]";
    }
  }
  out.push_back(response(req, true, json{{"result", result}, {"variablesReference", 0}}));
}

} // namespace verdap::dap
