#include "verdap/lang/ast.hpp"

namespace verdap::lang {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool same_list(const StmtList& a, const StmtList& b, bool with_locs);

bool same_stmt(const Stmt& a, const Stmt& b, bool with_locs) {
  if (a.identity() == b.identity()) return true;
  if (with_locs && !(a.loc() == b.loc())) return false;
  const auto& ka = a.node().kind;
  const auto& kb = b.node().kind;
  if (ka.index() != kb.index()) return false;
  return std::visit(
      overloaded{
          [&](const Assign& x) {
            const auto& y = std::get<Assign>(kb);
            return x.target == y.target && x.rhs == y.rhs;
          },
          [&](const LocalDecl& x) {
            const auto& y = std::get<LocalDecl>(kb);
            return x.name == y.name && x.sort == y.sort && x.init == y.init;
          },
          [&](const Assume& x) {
            const auto& y = std::get<Assume>(kb);
            return x.origin == y.origin && x.cond == y.cond;
          },
          [&](const Assert& x) {
            const auto& y = std::get<Assert>(kb);
            return x.origin == y.origin && x.cond == y.cond;
          },
          [&](const If& x) {
            const auto& y = std::get<If>(kb);
            return x.cond == y.cond && same_list(x.then_body, y.then_body, with_locs) &&
                   same_list(x.else_body, y.else_body, with_locs);
          },
          [&](const While& x) {
            const auto& y = std::get<While>(kb);
            return x.cond == y.cond && x.invariant == y.invariant &&
                   same_list(x.body, y.body, with_locs);
          },
          [&](const Call& x) {
            const auto& y = std::get<Call>(kb);
            return x.result == y.result && x.callee == y.callee && x.args == y.args;
          },
          [&](const ExitFrame& x) { return x.result == std::get<ExitFrame>(kb).result; },
      },
      ka);
}

bool same_list(const StmtList& a, const StmtList& b, bool with_locs) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_stmt(a[i], b[i], with_locs)) return false;
  }
  return true;
}

void collect_modified(const StmtList& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    std::visit(overloaded{
                   [&](const Assign& a) { out.insert(a.target); },
                   [&](const LocalDecl& d) { out.insert(d.name); },
                   [&](const If& i) {
                     collect_modified(i.then_body, out);
                     collect_modified(i.else_body, out);
                   },
                   [&](const While& w) { collect_modified(w.body, out); },
                   [&](const Call& c) {
                     if (c.result) out.insert(*c.result);
                   },
                   [&](const ExitFrame& e) {
                     if (e.result) out.insert(*e.result);
                   },
                   [](const auto&) {},
               },
               s.node().kind);
  }
}

void collect_lines(const StmtList& body, std::set<int>& out) {
  for (const auto& s : body) {
    out.insert(s.loc().line);
    std::visit(overloaded{
                   [&](const If& i) {
                     collect_lines(i.then_body, out);
                     collect_lines(i.else_body, out);
                   },
                   [&](const While& w) { collect_lines(w.body, out); },
                   [](const auto&) {},
               },
               s.node().kind);
  }
}

} // namespace

std::string to_string(const SourceLoc& loc) {
  return loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

const SourceLoc& Stmt::loc() const { return node_->loc; }

bool operator==(const Stmt& a, const Stmt& b) { return same_stmt(a, b, true); }

std::optional<Sort> Procedure::param_sort(const std::string& param) const {
  for (const auto& p : params) {
    if (p.name == param) return p.sort;
  }
  return std::nullopt;
}

const Procedure* TranslationUnit::find_procedure(const std::string& name) const {
  for (const auto& p : procedures) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Global* TranslationUnit::find_global(const std::string& name) const {
  for (const auto& g : globals) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::optional<SourceLoc> loc_of(const StmtList& program) {
  if (program.empty()) return std::nullopt;
  return program.front().loc();
}

std::set<std::string> modified_vars(const StmtList& body) {
  std::set<std::string> out;
  collect_modified(body, out);
  return out;
}

std::set<int> statement_lines(const TranslationUnit& unit) {
  std::set<int> out;
  for (const auto& p : unit.procedures) collect_lines(p.body, out);
  return out;
}

bool same_structure(const StmtList& a, const StmtList& b) { return same_list(a, b, false); }

bool same_structure(const TranslationUnit& a, const TranslationUnit& b) {
  if (a.globals.size() != b.globals.size() || a.procedures.size() != b.procedures.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    const auto& x = a.globals[i];
    const auto& y = b.globals[i];
    if (x.name != y.name || x.sort != y.sort || !(x.init == y.init)) return false;
  }
  for (std::size_t i = 0; i < a.procedures.size(); ++i) {
    const auto& x = a.procedures[i];
    const auto& y = b.procedures[i];
    if (x.name != y.name || x.params != y.params || x.return_sort != y.return_sort ||
        !(x.precondition == y.precondition) || !(x.postcondition == y.postcondition) ||
        !same_list(x.body, y.body, false)) {
      return false;
    }
  }
  return true;
}

} // namespace verdap::lang
