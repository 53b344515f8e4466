#include "checker.hpp"

#include <map>

namespace verdap::lang::detail {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

enum class VarKind { Global, Param, Local, Result };

struct VarInfo {
  Sort sort;
  VarKind kind;
};

class Checker {
public:
  Checker(std::string file, std::vector<Diagnostic>& diags) : file_(std::move(file)), diags_(diags) {}

  std::optional<TranslationUnit> unit(const TranslationUnit& raw) {
    TranslationUnit out;
    out.file = raw.file;
    std::size_t before = diags_.size();

    for (const auto& g : raw.globals) {
      if (g.name == kResultName) {
        resolution(g.loc, "'result' is reserved and cannot name a global");
      } else if (globals_.count(g.name)) {
        resolution(g.loc, "duplicate global '" + g.name + "'");
      }
      // Initializers see only the globals declared before them.
      auto init = expr(g.init, [&](const std::string& n) -> std::optional<VarInfo> {
        auto it = globals_.find(n);
        if (it == globals_.end()) return std::nullopt;
        return it->second;
      });
      if (init) expect_sort(*init, g.sort, "global initializer");
      globals_.emplace(g.name, VarInfo{g.sort, VarKind::Global});
      if (init) out.globals.push_back(Global{g.name, g.sort, *init, g.loc});
    }

    for (const auto& p : raw.procedures) {
      if (procs_.count(p.name)) {
        resolution(p.loc, "duplicate procedure '" + p.name + "'");
      } else if (globals_.count(p.name)) {
        resolution(p.loc, "procedure '" + p.name + "' clashes with a global of the same name");
      }
      procs_.emplace(p.name, &p);
    }

    for (const auto& p : raw.procedures) out.procedures.push_back(procedure(p));

    if (diags_.size() != before) return std::nullopt;
    return out;
  }

  std::optional<Expr> standalone(const Expr& raw, const SortEnv& env) {
    return expr(raw, [&](const std::string& n) -> std::optional<VarInfo> {
      if (auto s = env(n)) return VarInfo{*s, VarKind::Local};
      return std::nullopt;
    });
  }

private:
  using Lookup = std::function<std::optional<VarInfo>(const std::string&)>;

  void report(Diagnostic::Kind kind, const SourceLoc& loc, std::string msg) {
    diags_.push_back(Diagnostic{kind, loc, std::move(msg), {}});
  }
  void resolution(const SourceLoc& loc, std::string msg) {
    report(Diagnostic::Kind::Resolution, loc, std::move(msg));
  }
  void type_error(const SourceLoc& loc, std::string msg) {
    report(Diagnostic::Kind::Type, loc, std::move(msg));
  }
  SourceLoc at(const Expr& e) const {
    Pos p = e.pos();
    return SourceLoc{file_, p.line > 0 ? p.line : 1, p.column > 0 ? p.column : 1};
  }

  void expect_sort(const Expr& e, Sort want, const std::string& what) {
    if (e.sort() != want) {
      type_error(at(e), what + " must be " + sort_name(want) + ", found " + sort_name(e.sort()));
    }
  }

  std::optional<Expr> expr(const Expr& raw, const Lookup& lookup) {
    return std::visit(
        overloaded{
            [&](const ProgVar& v) -> std::optional<Expr> {
              auto info = lookup(v.name);
              if (!info) {
                if (v.name == kResultName) {
                  resolution(at(raw), "'result' is only available in procedures with a return sort");
                } else {
                  resolution(at(raw), "unknown identifier '" + v.name + "'");
                }
                return std::nullopt;
              }
              return Expr::prog_var(v.name, info->sort, raw.pos());
            },
            [&](const Unary& u) -> std::optional<Expr> {
              auto arg = expr(u.arg, lookup);
              if (!arg) return std::nullopt;
              Sort want = u.op == UnaryOp::Neg ? Sort::Int : Sort::Bool;
              if (arg->sort() != want) {
                type_error(at(raw), std::string("operand of '") + (u.op == UnaryOp::Neg ? "-" : "!") +
                                        "' must be " + sort_name(want) + ", found " +
                                        sort_name(arg->sort()));
                return std::nullopt;
              }
              return Expr::unary(u.op, *arg, raw.pos());
            },
            [&](const Binary& b) -> std::optional<Expr> {
              auto l = expr(b.lhs, lookup);
              auto r = expr(b.rhs, lookup);
              if (!l || !r) return std::nullopt;
              Sort operand;
              switch (b.op) {
              case BinaryOp::And:
              case BinaryOp::Or:
              case BinaryOp::Implies:
                operand = Sort::Bool;
                break;
              case BinaryOp::Eq:
              case BinaryOp::Ne:
                if (l->sort() != r->sort()) {
                  type_error(at(raw), std::string("cannot compare ") + sort_name(l->sort()) +
                                          " with " + sort_name(r->sort()));
                  return std::nullopt;
                }
                return Expr::binary(b.op, *l, *r, raw.pos());
              default:
                operand = Sort::Int;
              }
              if (l->sort() != operand || r->sort() != operand) {
                const Expr& bad = l->sort() != operand ? *l : *r;
                type_error(at(bad), std::string("operand must be ") + sort_name(operand) +
                                        ", found " + sort_name(bad.sort()));
                return std::nullopt;
              }
              return Expr::binary(b.op, *l, *r, raw.pos());
            },
            [&](const auto&) -> std::optional<Expr> { return raw; },
        },
        raw.node().kind);
  }

  // Per-procedure state.
  const Procedure* proc_ = nullptr;
  std::vector<std::map<std::string, Sort>> locals_;

  std::optional<VarInfo> lookup_in_proc(const std::string& name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (auto f = it->find(name); f != it->end()) return VarInfo{f->second, VarKind::Local};
    }
    if (auto s = proc_->param_sort(name)) return VarInfo{*s, VarKind::Param};
    if (name == kResultName && proc_->return_sort) return VarInfo{*proc_->return_sort, VarKind::Result};
    if (auto it = globals_.find(name); it != globals_.end()) return it->second;
    return std::nullopt;
  }

  Lookup proc_lookup() {
    return [this](const std::string& n) { return lookup_in_proc(n); };
  }

  Procedure procedure(const Procedure& raw) {
    proc_ = &raw;
    locals_.clear();
    Procedure out = raw;
    out.body.clear();

    for (std::size_t i = 0; i < raw.params.size(); ++i) {
      const auto& name = raw.params[i].name;
      if (name == kResultName) resolution(raw.loc, "'result' is reserved and cannot name a parameter");
      for (std::size_t j = 0; j < i; ++j) {
        if (raw.params[j].name == name) resolution(raw.loc, "duplicate parameter '" + name + "'");
      }
    }

    // Preconditions cannot see `result`.
    auto pre = expr(raw.precondition, [this](const std::string& n) -> std::optional<VarInfo> {
      if (n == kResultName) return std::nullopt;
      return lookup_in_proc(n);
    });
    if (pre) {
      expect_sort(*pre, Sort::Bool, "precondition");
      out.precondition = *pre;
    }
    if (auto post = expr(raw.postcondition, proc_lookup())) {
      expect_sort(*post, Sort::Bool, "postcondition");
      out.postcondition = *post;
    }

    locals_.emplace_back();
    out.body = block(raw.body);
    locals_.pop_back();
    return out;
  }

  StmtList block(const StmtList& body) {
    StmtList out;
    for (const auto& s : body) {
      if (auto c = stmt(s)) out.push_back(*c);
    }
    return out;
  }

  StmtList scoped_block(const StmtList& body) {
    locals_.emplace_back();
    StmtList out = block(body);
    locals_.pop_back();
    return out;
  }

  std::optional<Expr> bool_expr(const Expr& raw, const std::string& what) {
    auto e = expr(raw, proc_lookup());
    if (!e) return std::nullopt;
    if (e->sort() != Sort::Bool) {
      expect_sort(*e, Sort::Bool, what);
      return std::nullopt;
    }
    return e;
  }

  /// Sort of an assignment target, or nullopt after reporting why it is
  /// not assignable.
  std::optional<Sort> assignable(const std::string& name, const SourceLoc& loc) {
    auto info = lookup_in_proc(name);
    if (!info) {
      if (name == kResultName) {
        resolution(loc, "'result' is only available in procedures with a return sort");
      } else {
        resolution(loc, "unknown identifier '" + name + "'");
      }
      return std::nullopt;
    }
    switch (info->kind) {
    case VarKind::Param:
      type_error(loc, "parameter '" + name + "' is immutable");
      return std::nullopt;
    case VarKind::Global:
      type_error(loc, "global '" + name + "' is read-only inside procedures");
      return std::nullopt;
    default:
      return info->sort;
    }
  }

  std::optional<Stmt> stmt(const Stmt& s) {
    const SourceLoc& loc = s.loc();
    return std::visit(
        overloaded{
            [&](const Assign& a) -> std::optional<Stmt> {
              auto target = assignable(a.target, loc);
              auto rhs = expr(a.rhs, proc_lookup());
              if (!target || !rhs) return std::nullopt;
              if (rhs->sort() != *target) {
                type_error(at(*rhs), "cannot assign " + std::string(sort_name(rhs->sort())) +
                                         " to '" + a.target + "' of sort " + sort_name(*target));
                return std::nullopt;
              }
              return make_stmt(Assign{a.target, *rhs}, loc);
            },
            [&](const LocalDecl& d) -> std::optional<Stmt> {
              auto init = expr(d.init, proc_lookup());
              bool ok = init.has_value();
              if (d.name == kResultName) {
                resolution(loc, "'result' is reserved and cannot name a local");
                ok = false;
              } else if (auto prior = lookup_in_proc(d.name);
                         prior && prior->kind != VarKind::Global) {
                resolution(loc, "duplicate name '" + d.name + "'");
                ok = false;
              }
              if (init && init->sort() != d.sort) {
                expect_sort(*init, d.sort, "initializer of '" + d.name + "'");
                ok = false;
              }
              locals_.back().emplace(d.name, d.sort);
              if (!ok) return std::nullopt;
              return make_stmt(LocalDecl{d.name, d.sort, *init}, loc);
            },
            [&](const Assume& a) -> std::optional<Stmt> {
              auto c = bool_expr(a.cond, "assumption");
              if (!c) return std::nullopt;
              return make_stmt(Assume{*c, a.origin}, loc);
            },
            [&](const Assert& a) -> std::optional<Stmt> {
              auto c = bool_expr(a.cond, "assertion");
              if (!c) return std::nullopt;
              return make_stmt(Assert{*c, a.origin}, loc);
            },
            [&](const If& i) -> std::optional<Stmt> {
              auto c = bool_expr(i.cond, "condition");
              StmtList then_body = scoped_block(i.then_body);
              StmtList else_body = scoped_block(i.else_body);
              if (!c) return std::nullopt;
              return make_stmt(If{*c, std::move(then_body), std::move(else_body)}, loc);
            },
            [&](const While& w) -> std::optional<Stmt> {
              auto c = bool_expr(w.cond, "loop condition");
              auto inv = bool_expr(w.invariant, "loop invariant");
              StmtList body = scoped_block(w.body);
              if (!c || !inv) return std::nullopt;
              return make_stmt(While{*c, *inv, std::move(body), w.invariant_loc}, loc);
            },
            [&](const Call& c) -> std::optional<Stmt> { return call(c, loc); },
            [&](const ExitFrame&) -> std::optional<Stmt> { return s; },
        },
        s.node().kind);
  }

  std::optional<Stmt> call(const Call& c, const SourceLoc& loc) {
    bool ok = true;
    std::optional<Sort> target;
    if (c.result) {
      target = assignable(*c.result, loc);
      ok = target.has_value();
    }
    std::vector<Expr> args;
    for (const auto& a : c.args) {
      if (auto e = expr(a, proc_lookup())) {
        args.push_back(*e);
      } else {
        ok = false;
      }
    }
    auto callee = procs_.find(c.callee);
    if (callee == procs_.end()) {
      resolution(loc, "unknown procedure '" + c.callee + "'");
      return std::nullopt;
    }
    const Procedure& p = *callee->second;
    if (c.args.size() != p.params.size()) {
      resolution(loc, "'" + c.callee + "' expects " + std::to_string(p.params.size()) +
                          " argument(s), got " + std::to_string(c.args.size()));
      return std::nullopt;
    }
    if (!ok) return std::nullopt;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].sort() != p.params[i].sort) {
        type_error(at(args[i]), "argument " + std::to_string(i + 1) + " of '" + c.callee +
                                    "' must be " + sort_name(p.params[i].sort) + ", found " +
                                    sort_name(args[i].sort()));
        ok = false;
      }
    }
    if (target) {
      if (!p.return_sort) {
        type_error(loc, "'" + c.callee + "' does not return a value");
        ok = false;
      } else if (*p.return_sort != *target) {
        type_error(loc, "cannot assign " + std::string(sort_name(*p.return_sort)) + " result of '" +
                            c.callee + "' to '" + *c.result + "' of sort " + sort_name(*target));
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return make_stmt(Call{c.result, c.callee, std::move(args)}, loc);
  }

  std::string file_;
  std::vector<Diagnostic>& diags_;
  std::map<std::string, VarInfo> globals_;
  std::map<std::string, const Procedure*> procs_;
};

} // namespace

std::optional<TranslationUnit> check_unit(const TranslationUnit& raw, std::vector<Diagnostic>& diags) {
  return Checker(raw.file, diags).unit(raw);
}

std::optional<Expr> check_standalone(const Expr& raw, const std::string& file, const SortEnv& env,
                                     std::vector<Diagnostic>& diags) {
  return Checker(file, diags).standalone(raw, env);
}

} // namespace verdap::lang::detail
