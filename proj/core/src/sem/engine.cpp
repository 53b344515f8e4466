#include "verdap/sem/engine.hpp"

#include <functional>

namespace verdap::sem {

namespace {

using lang::BinaryOp;
using lang::Stmt;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

StmtList concat(const StmtList& a, const StmtList& b) {
  StmtList out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

ObligationKind assert_kind(lang::AssertOrigin origin) {
  switch (origin) {
  case lang::AssertOrigin::User: return ObligationKind::AssertFailure;
  case lang::AssertOrigin::Ensures: return ObligationKind::PostconditionFailure;
  case lang::AssertOrigin::Invariant: return ObligationKind::InvariantPreserveFailure;
  }
  return ObligationKind::AssertFailure;
}

/// Working state of the leaf being stepped.
class Stepper {
public:
  Stepper(const Sequential& leaf, StepContext& ctx)
      : ctx_(ctx), store_(leaf.store), path_(leaf.path), feasibility_(leaf.feasibility),
        frames_(leaf.frames),
        head_(leaf.rest.front()), rest_(leaf.rest.begin() + 1, leaf.rest.end()) {}

  Config run() {
    return std::visit(overloaded{
                          [&](const lang::Assign& a) { return assign(a); },
                          [&](const lang::LocalDecl& d) { return local(d); },
                          [&](const lang::Assume& a) { return assume(a); },
                          [&](const lang::Assert& a) { return assert_(a); },
                          [&](const lang::If& i) { return if_(i); },
                          [&](const lang::While& w) { return while_(w); },
                          [&](const lang::Call& c) { return call(c); },
                          [&](const lang::ExitFrame& e) { return exit_frame(e); },
                      },
                      head_.node().kind);
  }

private:
  const std::string& procedure() const { return frames_.front().proc_name; }

  std::optional<Sort> result_sort() const {
    const lang::Procedure* p = ctx_.unit.find_procedure(frames_.back().proc_name);
    return p ? p->return_sort : std::nullopt;
  }

  bool result_bound(const SymbolicStore& s) const {
    if (s.depth() < 2) return false;
    for (const auto& b : s.scopes().back()) {
      if (b.name == lang::kResultName) return true;
    }
    return false;
  }

  /// `result` has no value until assigned; reading it earlier havocs it.
  void ensure_result(SymbolicStore& s, const Expr& e) {
    if (!lang::mentions_prog_var(e, lang::kResultName) || result_bound(s)) return;
    Sort sort = result_sort().value_or(Sort::Int);
    s.bind_local(lang::kResultName, sort, ctx_.counter.fresh(lang::kResultName, sort));
  }

  Expr eval(SymbolicStore& s, const Expr& e) {
    ensure_result(s, e);
    return substitute(s, e, checks_);
  }

  void write(SymbolicStore& s, const std::string& name, Expr value) {
    if (name == lang::kResultName && !result_bound(s)) {
      Sort sort = value.sort();
      s.bind_local(name, sort, std::move(value));
    } else {
      s.assign(name, std::move(value));
    }
  }

  /// Wraps `base` with one obligation per division check collected so
  /// far; the continuing branch learns that each divisor is nonzero.
  Config finish(const std::function<Config(const PathCondition&)>& base) {
    if (checks_.empty()) return base(path_);
    Parallel par;
    PathCondition cont = path_;
    for (const auto& c : checks_) {
      Expr nonzero = lang::fold(Expr::binary(BinaryOp::Ne, c.divisor, Expr::int_lit(0)));
      if (nonzero.is_true()) continue;
      PathCondition at_check = path_;
      for (const auto& g : c.guards) at_check = at_check.with(g);
      SourceLoc at = head_.loc();
      if (c.pos.line > 0) {
        at.line = c.pos.line;
        at.column = c.pos.column;
      }
      par.children.push_back(Config(Obligation{std::move(at_check), lang::negate(nonzero),
                                               ObligationKind::DivisionByZero, at,
                                               ObligationStatus{}, procedure()}));
      if (c.guards.empty()) {
        cont = cont.with(nonzero);
      } else {
        cont = cont.with(Expr::binary(BinaryOp::Implies, lang::conjunction(c.guards), nonzero));
      }
    }
    if (par.children.empty()) return base(path_);
    par.children.push_back(base(cont));
    return Config(std::move(par));
  }

  /// A leaf whose path is unchanged keeps the cached feasibility.
  Config leaf(SymbolicStore s, PathCondition p, StmtList rest) {
    Feasibility f = p == path_ ? feasibility_ : Feasibility::Unchecked;
    return make_leaf(std::move(s), std::move(p), std::move(rest), frames_, f);
  }

  Config assign(const lang::Assign& a) {
    Expr v = eval(store_, a.rhs);
    SymbolicStore s = store_;
    write(s, a.target, v);
    return finish([&](const PathCondition& p) { return leaf(s, p, rest_); });
  }

  Config local(const lang::LocalDecl& d) {
    Expr v = eval(store_, d.init);
    SymbolicStore s = store_;
    s.bind_local(d.name, d.sort, v);
    return finish([&](const PathCondition& p) { return leaf(s, p, rest_); });
  }

  Config assume(const lang::Assume& a) {
    Expr v = eval(store_, a.cond);
    return finish([&](const PathCondition& p) { return leaf(store_, p.with(v), rest_); });
  }

  Config assert_(const lang::Assert& a) {
    Expr v = eval(store_, a.cond);
    return finish([&](const PathCondition& p) {
      Parallel par;
      par.children.push_back(leaf(store_, p.with(v), rest_));
      par.children.push_back(Config(Obligation{p, lang::negate(v), assert_kind(a.origin), head_.loc(),
                                               ObligationStatus{}, procedure()}));
      return Config(std::move(par));
    });
  }

  Config if_(const lang::If& i) {
    Expr v = eval(store_, i.cond);
    return finish([&](const PathCondition& p) {
      Parallel par;
      par.children.push_back(leaf(store_, p.with(v), concat(i.then_body, rest_)));
      par.children.push_back(leaf(store_, p.with(lang::negate(v)), concat(i.else_body, rest_)));
      return Config(std::move(par));
    });
  }

  Config while_(const lang::While& w) {
    Expr entry_inv = eval(store_, w.invariant);
    std::set<std::string> mods;
    std::set<std::string> bound = store_.visible();
    for (const auto& name : lang::modified_vars(w.body)) {
      if (bound.count(name)) mods.insert(name);
    }
    SymbolicStore hat = freshen(store_, mods, ctx_.counter);
    Expr cond = eval(hat, w.cond);
    Expr inv = eval(hat, w.invariant);

    StmtList preserve = w.body;
    preserve.push_back(lang::make_stmt(lang::Assert{w.invariant, lang::AssertOrigin::Invariant},
                                       w.invariant_loc));
    return finish([&](const PathCondition& p) {
      Parallel par;
      par.children.push_back(Config(Obligation{p, lang::negate(entry_inv),
                                               ObligationKind::InvariantInitFailure, w.invariant_loc,
                                               ObligationStatus{}, procedure()}));
      par.children.push_back(leaf(hat, p.with(cond).with(inv), preserve));
      par.children.push_back(leaf(hat, p.with(lang::negate(cond)).with(inv), rest_));
      return Config(std::move(par));
    });
  }

  Config call(const lang::Call& c) {
    const lang::Procedure* callee = ctx_.unit.find_procedure(c.callee);
    if (!callee) throw NotSteppable("call to unknown procedure '" + c.callee + "'");
    std::vector<Expr> args;
    for (const auto& a : c.args) args.push_back(eval(store_, a));

    if (ctx_.mode == CallMode::Inline) {
      SymbolicStore s = store_;
      s.push_scope();
      for (std::size_t i = 0; i < callee->params.size(); ++i) {
        s.bind_local(callee->params[i].name, callee->params[i].sort, args[i]);
      }
      StmtList body = callee->body;
      if (!callee->postcondition.is_true()) {
        body.push_back(lang::make_stmt(lang::Assert{callee->postcondition, lang::AssertOrigin::Ensures},
                                       callee->postcondition_loc));
      }
      body.push_back(lang::make_stmt(lang::ExitFrame{c.result}, head_.loc()));
      std::vector<FrameInfo> frames = frames_;
      frames.push_back(FrameInfo{callee->name, head_.loc(), s.depth() - 1});
      StmtList rest = concat(body, rest_);
      return finish([&](const PathCondition& p) {
        return make_leaf(s, p, rest, frames, p == path_ ? feasibility_ : Feasibility::Unchecked);
      });
    }

    // Contract: check P[y := a], havoc the result, assume Q[y := a, result := rho].
    SymbolicStore callee_store;
    for (const auto& g : store_.scopes().front()) callee_store.bind_global(g.name, g.sort, g.value);
    callee_store.push_scope();
    for (std::size_t i = 0; i < callee->params.size(); ++i) {
      callee_store.bind_local(callee->params[i].name, callee->params[i].sort, args[i]);
    }
    Expr pre = substitute(callee_store, callee->precondition);
    SymbolicStore s = store_;
    if (callee->return_sort) {
      Expr rho = ctx_.counter.fresh(c.result.value_or(lang::kResultName), *callee->return_sort);
      callee_store.bind_local(lang::kResultName, *callee->return_sort, rho);
      if (c.result) write(s, *c.result, rho);
    }
    Expr post = substitute(callee_store, callee->postcondition);
    return finish([&](const PathCondition& p) {
      Parallel par;
      par.children.push_back(Config(Obligation{p, lang::negate(pre), ObligationKind::PreconditionFailure,
                                               head_.loc(), ObligationStatus{}, procedure()}));
      par.children.push_back(leaf(s, p.with(post), rest_));
      return Config(std::move(par));
    });
  }

  Config exit_frame(const lang::ExitFrame& e) {
    SymbolicStore s = store_;
    std::optional<Expr> value;
    if (auto sort = result_sort()) {
      if (!result_bound(s)) s.bind_local(lang::kResultName, *sort, ctx_.counter.fresh(lang::kResultName, *sort));
      value = s.lookup(lang::kResultName)->value;
    }
    s.pop_scope();
    frames_.pop_back();
    if (e.result && value) write(s, *e.result, *value);
    return leaf(s, path_, rest_);
  }

  StepContext& ctx_;
  SymbolicStore store_;
  PathCondition path_;
  Feasibility feasibility_;
  std::vector<FrameInfo> frames_;
  Stmt head_;
  StmtList rest_;
  std::vector<DivisionCheck> checks_;
};

} // namespace

Config initial_config(const lang::TranslationUnit& unit, FreshCounter& counter) {
  Parallel top;
  for (const auto& proc : unit.procedures) {
    SymbolicStore s;
    for (const auto& g : unit.globals) s.bind_global(g.name, g.sort, counter.fresh(g.name, g.sort));
    s.push_scope();
    for (const auto& p : proc.params) s.bind_local(p.name, p.sort, counter.fresh(p.name, p.sort));

    StmtList rest;
    if (proc.name == "main") {
      for (const auto& g : unit.globals) rest.push_back(lang::make_stmt(lang::Assign{g.name, g.init}, g.loc));
    }
    if (!proc.precondition.is_true()) {
      rest.push_back(lang::make_stmt(lang::Assume{proc.precondition, lang::AssumeOrigin::Requires},
                                     proc.precondition_loc));
    }
    rest.insert(rest.end(), proc.body.begin(), proc.body.end());
    if (!proc.postcondition.is_true()) {
      rest.push_back(lang::make_stmt(lang::Assert{proc.postcondition, lang::AssertOrigin::Ensures},
                                     proc.postcondition_loc));
    }
    top.children.push_back(make_leaf(std::move(s), {}, std::move(rest), {FrameInfo{proc.name, std::nullopt, 1}}));
  }
  return Config(std::move(top));
}

Config step_leaf(const Sequential& leaf, StepContext& ctx) { return Stepper(leaf, ctx).run(); }

Config step(const Config& c, const Schedule& sigma, StepContext& ctx) {
  const Config& target = resolve(c, sigma);
  const auto* leaf = target.as<Sequential>();
  if (!leaf) throw NotSteppable("thread " + thread_name(sigma) + " cannot step");
  return replace_at(c, sigma, step_leaf(*leaf, ctx));
}

} // namespace verdap::sem
