#include "verdap/lang/expr.hpp"

#include <sstream>
#include <vector>

namespace verdap::lang {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kUnaryPrec = 8;
constexpr int kAtomPrec = 9;

Sort result_sort(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add:
  case BinaryOp::Sub:
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Mod:
    return Sort::Int;
  default:
    return Sort::Bool;
  }
}

const char* source_op(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  case BinaryOp::Mod: return "%";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::Eq: return "==";
  case BinaryOp::Ne: return "!=";
  case BinaryOp::And: return "&&";
  case BinaryOp::Or: return "||";
  case BinaryOp::Implies: return "==>";
  }
  return "?";
}

const char* display_op(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "−";
  case BinaryOp::Mul: return "×";
  case BinaryOp::Div: return "div";
  case BinaryOp::Mod: return "mod";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "≤";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return "≥";
  case BinaryOp::Eq: return "=";
  case BinaryOp::Ne: return "≠";
  case BinaryOp::And: return "∧";
  case BinaryOp::Or: return "∨";
  case BinaryOp::Implies: return "⟹";
  }
  return "?";
}

std::string subscript(std::uint64_t n) {
  static const char* digits[] = {"₀", "₁", "₂", "₃", "₄",
                                 "₅", "₆", "₇", "₈", "₉"};
  std::string plain = std::to_string(n);
  std::string out;
  for (char c : plain) out += digits[c - '0'];
  return out;
}

int expr_precedence(const Expr& e) {
  return std::visit(overloaded{
                        [](const Binary& b) { return precedence(b.op); },
                        [](const Unary&) { return kUnaryPrec; },
                        [](const IntLit& l) { return l.value < 0 ? kUnaryPrec : kAtomPrec; },
                        [](const auto&) { return kAtomPrec; },
                    },
                    e.node().kind);
}

bool is_unary_like(const Expr& e) {
  if (std::holds_alternative<Unary>(e.node().kind)) return true;
  if (auto* lit = std::get_if<IntLit>(&e.node().kind)) return lit->value < 0;
  return false;
}

struct Renderer {
  bool display;

  void lit(std::ostream& os, const BigInt& v) const {
    if (v < 0) {
      os << (display ? "−" : "-") << BigInt(-v).str();
    } else {
      os << v.str();
    }
  }

  void operand(std::ostream& os, const Expr& e, int min_prec) const {
    if (expr_precedence(e) < min_prec) {
      os << '(';
      render(os, e);
      os << ')';
    } else {
      render(os, e);
    }
  }

  void render(std::ostream& os, const Expr& e) const {
    std::visit(overloaded{
                   [&](const IntLit& l) { lit(os, l.value); },
                   [&](const BoolLit& b) { os << (b.value ? "true" : "false"); },
                   [&](const ProgVar& v) { os << v.name; },
                   [&](const LogicVar& v) {
                     if (display) {
                       os << v.name << subscript(v.index);
                     } else {
                       os << v.name << '#' << v.index;
                     }
                   },
                   [&](const Unary& u) {
                     if (u.op == UnaryOp::Neg) {
                       os << (display ? "−" : "-");
                     } else {
                       os << (display ? "¬" : "!");
                     }
                     if (is_unary_like(u.arg)) {
                       os << '(';
                       render(os, u.arg);
                       os << ')';
                     } else {
                       operand(os, u.arg, kUnaryPrec);
                     }
                   },
                   [&](const Binary& b) {
                     int p = precedence(b.op);
                     bool right_assoc = b.op == BinaryOp::Implies;
                     operand(os, b.lhs, right_assoc ? p + 1 : p);
                     os << ' ' << (display ? display_op(b.op) : source_op(b.op)) << ' ';
                     operand(os, b.rhs, right_assoc ? p : p + 1);
                   },
               },
               e.node().kind);
  }
};

BigInt as_int(const Value& v) {
  if (auto* i = std::get_if<BigInt>(&v)) return *i;
  throw EvalError("expected an integer value");
}

bool as_bool(const Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError("expected a boolean value");
}

std::optional<Value> literal_value(const Expr& e) {
  if (auto* i = std::get_if<IntLit>(&e.node().kind)) return Value{i->value};
  if (auto* b = std::get_if<BoolLit>(&e.node().kind)) return Value{b->value};
  return std::nullopt;
}

Expr from_value(const Value& v, Pos pos) {
  if (auto* i = std::get_if<BigInt>(&v)) return Expr::int_lit(*i, pos);
  return Expr::bool_lit(std::get<bool>(v), pos);
}

Value apply_binary(BinaryOp op, const Value& l, const Value& r) {
  switch (op) {
  case BinaryOp::Add: return as_int(l) + as_int(r);
  case BinaryOp::Sub: return as_int(l) - as_int(r);
  case BinaryOp::Mul: return as_int(l) * as_int(r);
  case BinaryOp::Div: return euclid_div(as_int(l), as_int(r));
  case BinaryOp::Mod: return euclid_mod(as_int(l), as_int(r));
  case BinaryOp::Lt: return as_int(l) < as_int(r);
  case BinaryOp::Le: return as_int(l) <= as_int(r);
  case BinaryOp::Gt: return as_int(l) > as_int(r);
  case BinaryOp::Ge: return as_int(l) >= as_int(r);
  case BinaryOp::Eq: return l == r;
  case BinaryOp::Ne: return l != r;
  case BinaryOp::And: return as_bool(l) && as_bool(r);
  case BinaryOp::Or: return as_bool(l) || as_bool(r);
  case BinaryOp::Implies: return !as_bool(l) || as_bool(r);
  }
  throw EvalError("unknown operator");
}

void collect_logic_vars(const Expr& e, std::set<LogicVarKey>& out) {
  std::visit(overloaded{
                 [&](const LogicVar& v) { out.insert({v.name, v.index, e.sort()}); },
                 [&](const Unary& u) { collect_logic_vars(u.arg, out); },
                 [&](const Binary& b) {
                   collect_logic_vars(b.lhs, out);
                   collect_logic_vars(b.rhs, out);
                 },
                 [](const auto&) {},
             },
             e.node().kind);
}

} // namespace

const char* sort_name(Sort sort) { return sort == Sort::Int ? "int" : "bool"; }

int precedence(BinaryOp op) {
  switch (op) {
  case BinaryOp::Implies: return 1;
  case BinaryOp::Or: return 2;
  case BinaryOp::And: return 3;
  case BinaryOp::Eq:
  case BinaryOp::Ne: return 4;
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge: return 5;
  case BinaryOp::Add:
  case BinaryOp::Sub: return 6;
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Mod: return 7;
  }
  return 0;
}

Expr Expr::int_lit(BigInt value, Pos pos) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{IntLit{std::move(value)}, Sort::Int, pos}));
}

Expr Expr::bool_lit(bool value, Pos pos) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{BoolLit{value}, Sort::Bool, pos}));
}

Expr Expr::prog_var(std::string name, Sort sort, Pos pos) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{ProgVar{std::move(name)}, sort, pos}));
}

Expr Expr::logic_var(std::string name, std::uint64_t index, Sort sort) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{LogicVar{std::move(name), index}, sort, {}}));
}

Expr Expr::unary(UnaryOp op, Expr arg, Pos pos) {
  Sort s = op == UnaryOp::Neg ? Sort::Int : Sort::Bool;
  return Expr(std::make_shared<const ExprNode>(ExprNode{Unary{op, std::move(arg)}, s, pos}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, Pos pos) {
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{Binary{op, std::move(lhs), std::move(rhs)}, result_sort(op), pos}));
}

Sort Expr::sort() const { return node_->sort; }
Pos Expr::pos() const { return node_->pos; }

bool Expr::is_true() const {
  auto* b = std::get_if<BoolLit>(&node_->kind);
  return b && b->value;
}

bool Expr::is_false() const {
  auto* b = std::get_if<BoolLit>(&node_->kind);
  return b && !b->value;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.sort() != b.sort()) return false;
  const auto& ka = a.node().kind;
  const auto& kb = b.node().kind;
  if (ka.index() != kb.index()) return false;
  return std::visit(
      overloaded{
          [&](const IntLit& l) { return l.value == std::get<IntLit>(kb).value; },
          [&](const BoolLit& l) { return l.value == std::get<BoolLit>(kb).value; },
          [&](const ProgVar& v) { return v.name == std::get<ProgVar>(kb).name; },
          [&](const LogicVar& v) {
            const auto& w = std::get<LogicVar>(kb);
            return v.index == w.index && v.name == w.name;
          },
          [&](const Unary& u) {
            const auto& w = std::get<Unary>(kb);
            return u.op == w.op && u.arg == w.arg;
          },
          [&](const Binary& x) {
            const auto& y = std::get<Binary>(kb);
            return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
          },
      },
      ka);
}

BigInt euclid_mod(const BigInt& a, const BigInt& b) {
  if (b == 0) return a;
  BigInt r = a % b;
  if (r < 0) r += (b < 0 ? BigInt(-b) : b);
  return r;
}

BigInt euclid_div(const BigInt& a, const BigInt& b) {
  if (b == 0) return 0;
  return (a - euclid_mod(a, b)) / b;
}

Value evaluate(const Expr& e, const Model& model) {
  return std::visit(
      overloaded{
          [](const IntLit& l) -> Value { return l.value; },
          [](const BoolLit& b) -> Value { return b.value; },
          [](const ProgVar& v) -> Value {
            throw EvalError("program variable '" + v.name + "' in logic expression");
          },
          [&](const LogicVar& v) -> Value {
            auto it = model.find(LogicVarKey{v.name, v.index, e.sort()});
            if (it == model.end()) {
              throw EvalError("no value for " + v.name + "#" + std::to_string(v.index));
            }
            return it->second;
          },
          [&](const Unary& u) -> Value {
            Value a = evaluate(u.arg, model);
            if (u.op == UnaryOp::Neg) return BigInt(-as_int(a));
            return !as_bool(a);
          },
          [&](const Binary& b) -> Value {
            // Short-circuit connectives so partial models over one side work.
            if (b.op == BinaryOp::And) {
              return as_bool(evaluate(b.lhs, model)) && as_bool(evaluate(b.rhs, model));
            }
            if (b.op == BinaryOp::Or) {
              return as_bool(evaluate(b.lhs, model)) || as_bool(evaluate(b.rhs, model));
            }
            if (b.op == BinaryOp::Implies) {
              return !as_bool(evaluate(b.lhs, model)) || as_bool(evaluate(b.rhs, model));
            }
            return apply_binary(b.op, evaluate(b.lhs, model), evaluate(b.rhs, model));
          },
      },
      e.node().kind);
}

bool evaluate_bool(const Expr& e, const Model& model) { return as_bool(evaluate(e, model)); }

Expr fold(const Expr& e) {
  return std::visit(
      overloaded{
          [&](const Unary& u) -> Expr {
            Expr arg = fold(u.arg);
            if (auto* inner = std::get_if<Unary>(&arg.node().kind); inner && inner->op == u.op) {
              return inner->arg;
            }
            if (auto v = literal_value(arg)) {
              if (u.op == UnaryOp::Neg) return Expr::int_lit(-std::get<BigInt>(*v), e.pos());
              return Expr::bool_lit(!std::get<bool>(*v), e.pos());
            }
            if (arg.identity() == u.arg.identity()) return e;
            return Expr::unary(u.op, arg, e.pos());
          },
          [&](const Binary& b) -> Expr {
            Expr l = fold(b.lhs);
            Expr r = fold(b.rhs);
            auto lv = literal_value(l);
            auto rv = literal_value(r);
            if (lv && rv) {
              bool zero_divisor = (b.op == BinaryOp::Div || b.op == BinaryOp::Mod) &&
                                  std::get<BigInt>(*rv) == 0;
              if (!zero_divisor) return from_value(apply_binary(b.op, *lv, *rv), e.pos());
            }
            if (b.op == BinaryOp::Sub && lv && std::get<BigInt>(*lv) == 0) {
              return fold(Expr::unary(UnaryOp::Neg, r, e.pos()));
            }
            if (l.identity() == b.lhs.identity() && r.identity() == b.rhs.identity()) return e;
            return Expr::binary(b.op, l, r, e.pos());
          },
          [&](const auto&) { return e; },
      },
      e.node().kind);
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Expr& x) -> void {
    std::visit(overloaded{
                   [&](const ProgVar& v) { out.insert(v.name); },
                   [&](const LogicVar& v) { out.insert(display_name({v.name, v.index, x.sort()})); },
                   [&](const Unary& u) { self(self, u.arg); },
                   [&](const Binary& b) {
                     self(self, b.lhs);
                     self(self, b.rhs);
                   },
                   [](const auto&) {},
               },
               x.node().kind);
  };
  walk(walk, e);
  return out;
}

std::set<LogicVarKey> free_logic_vars(const Expr& e) {
  std::set<LogicVarKey> out;
  collect_logic_vars(e, out);
  return out;
}

bool mentions_prog_var(const Expr& e, const std::string& name) {
  return std::visit(overloaded{
                        [&](const ProgVar& v) { return v.name == name; },
                        [&](const Unary& u) { return mentions_prog_var(u.arg, name); },
                        [&](const Binary& b) {
                          return mentions_prog_var(b.lhs, name) || mentions_prog_var(b.rhs, name);
                        },
                        [](const auto&) { return false; },
                    },
                    e.node().kind);
}

bool has_prog_vars(const Expr& e) {
  return std::visit(overloaded{
                        [](const ProgVar&) { return true; },
                        [](const Unary& u) { return has_prog_vars(u.arg); },
                        [](const Binary& b) { return has_prog_vars(b.lhs) || has_prog_vars(b.rhs); },
                        [](const auto&) { return false; },
                    },
                    e.node().kind);
}

Expr conjunction(const std::vector<Expr>& conjuncts) {
  if (conjuncts.empty()) return Expr::bool_lit(true);
  Expr acc = conjuncts.front();
  for (std::size_t i = 1; i < conjuncts.size(); ++i) {
    acc = Expr::binary(BinaryOp::And, acc, conjuncts[i]);
  }
  return acc;
}

Expr negate(const Expr& e) {
  if (auto* b = std::get_if<BoolLit>(&e.node().kind)) return Expr::bool_lit(!b->value, e.pos());
  if (auto* u = std::get_if<Unary>(&e.node().kind); u && u->op == UnaryOp::Not) return u->arg;
  return Expr::unary(UnaryOp::Not, e, e.pos());
}

std::string to_string(const Expr& e) {
  std::ostringstream os;
  Renderer{false}.render(os, e);
  return os.str();
}

std::string to_display(const Expr& e) {
  std::ostringstream os;
  Renderer{true}.render(os, e);
  return os.str();
}

std::string display_name(const LogicVarKey& key) { return key.name + subscript(key.index); }

std::string to_display(const Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const auto& i = std::get<BigInt>(v);
  if (i < 0) return "−" + BigInt(-i).str();
  return i.str();
}

std::string to_display(const Model& model) {
  std::string out;
  for (const auto& [key, value] : model) {
    if (!out.empty()) out += ", ";
    out += display_name(key) + " = " + to_display(value);
  }
  return out;
}

} // namespace verdap::lang
