#include "verdap/sem/store.hpp"

#include <algorithm>

namespace verdap::sem {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

Binding* find_in(Scope& scope, const std::string& name) {
  auto it = std::find_if(scope.begin(), scope.end(), [&](const Binding& b) { return b.name == name; });
  return it == scope.end() ? nullptr : &*it;
}

const Binding* find_in(const Scope& scope, const std::string& name) {
  auto it = std::find_if(scope.begin(), scope.end(), [&](const Binding& b) { return b.name == name; });
  return it == scope.end() ? nullptr : &*it;
}

void bind_into(Scope& scope, const std::string& name, Sort sort, Expr value) {
  if (Binding* b = find_in(scope, name)) {
    b->sort = sort;
    b->value = std::move(value);
  } else {
    scope.push_back(Binding{name, sort, std::move(value)});
  }
}

class Substituter {
public:
  Substituter(const SymbolicStore& s, std::vector<DivisionCheck>* checks) : s_(s), checks_(checks) {}

  Expr run(const Expr& e, const std::vector<Expr>& guards) {
    return std::visit(
        overloaded{
            [&](const lang::ProgVar& v) -> Expr {
              const Binding* b = s_.lookup(v.name);
              if (!b) throw UnboundVariable(v.name);
              return b->value;
            },
            [&](const lang::Unary& u) -> Expr {
              return lang::fold(Expr::unary(u.op, run(u.arg, guards), e.pos()));
            },
            [&](const lang::Binary& b) -> Expr {
              Expr lhs = run(b.lhs, guards);
              Expr rhs = b.rhs;
              switch (b.op) {
              case lang::BinaryOp::And:
              case lang::BinaryOp::Implies:
                rhs = run(b.rhs, extend(guards, lhs));
                break;
              case lang::BinaryOp::Or:
                rhs = run(b.rhs, extend(guards, lang::negate(lhs)));
                break;
              default:
                rhs = run(b.rhs, guards);
                break;
              }
              if (checks_ && (b.op == lang::BinaryOp::Div || b.op == lang::BinaryOp::Mod)) {
                checks_->push_back(DivisionCheck{guards, rhs, e.pos()});
              }
              return lang::fold(Expr::binary(b.op, lhs, rhs, e.pos()));
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.node().kind);
  }

private:
  static std::vector<Expr> extend(const std::vector<Expr>& guards, const Expr& g) {
    if (g.is_true()) return guards;
    std::vector<Expr> out = guards;
    out.push_back(g);
    return out;
  }

  const SymbolicStore& s_;
  std::vector<DivisionCheck>* checks_;
};

} // namespace

void SymbolicStore::pop_scope() {
  if (scopes_.size() > 1) scopes_.pop_back();
}

const Binding* SymbolicStore::lookup(const std::string& name) const {
  if (scopes_.size() > 1) {
    if (const Binding* b = find_in(scopes_.back(), name)) return b;
  }
  return find_in(scopes_.front(), name);
}

void SymbolicStore::bind_local(const std::string& name, Sort sort, Expr value) {
  bind_into(scopes_.back(), name, sort, std::move(value));
}

void SymbolicStore::bind_global(const std::string& name, Sort sort, Expr value) {
  bind_into(scopes_.front(), name, sort, std::move(value));
}

void SymbolicStore::assign(const std::string& name, Expr value) {
  Binding* b = scopes_.size() > 1 ? find_in(scopes_.back(), name) : nullptr;
  if (!b) b = find_in(scopes_.front(), name);
  if (!b) throw UnboundVariable(name);
  b->value = std::move(value);
}

std::set<std::string> SymbolicStore::visible() const {
  std::set<std::string> out;
  for (const auto& b : scopes_.front()) out.insert(b.name);
  if (scopes_.size() > 1) {
    for (const auto& b : scopes_.back()) out.insert(b.name);
  }
  return out;
}

PathCondition PathCondition::with(const Expr& e) const {
  PathCondition out = *this;
  if (!e.is_true()) out.conjuncts.push_back(e);
  return out;
}

std::string PathCondition::render() const { return lang::to_display(formula()); }

Expr substitute(const SymbolicStore& s, const Expr& e) {
  return Substituter(s, nullptr).run(e, {});
}

Expr substitute(const SymbolicStore& s, const Expr& e, std::vector<DivisionCheck>& checks) {
  return Substituter(s, &checks).run(e, {});
}

SymbolicStore freshen(const SymbolicStore& s, const std::set<std::string>& vars,
                      FreshCounter& counter) {
  SymbolicStore out = s;
  for (const auto& name : vars) {
    const Binding* b = s.lookup(name);
    if (!b) throw UnboundVariable(name);
    out.assign(name, counter.fresh(name, b->sort));
  }
  return out;
}

} // namespace verdap::sem
