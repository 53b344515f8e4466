#include "verdap/solve/smtlib.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

namespace verdap::solve {

namespace {

using lang::BinaryOp;
using lang::Expr;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "_", "!", "as", "let", "exists", "forall", "match", "par", "BINARY", "DECIMAL",
      "HEXADECIMAL", "NUMERAL", "STRING", "assert", "check-sat", "declare-const",
      "declare-fun", "define-fun", "get-model", "set-logic", "true", "false", "not",
      "and", "or", "div", "mod", "ite", "distinct", "Int", "Bool", "model", "push", "pop"};
  return words;
}

bool is_simple_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  return std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

const char* op_symbol(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "div";
  case BinaryOp::Mod: return "mod";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::Eq: return "=";
  case BinaryOp::Ne: return "distinct";
  case BinaryOp::And: return "and";
  case BinaryOp::Or: return "or";
  case BinaryOp::Implies: return "=>";
  }
  return "?";
}

std::string int_literal(const lang::BigInt& v) {
  if (v < 0) return "(- " + lang::BigInt(-v).str() + ")";
  return v.str();
}

void emit(std::ostream& os, const Expr& e) {
  std::visit(overloaded{
                 [&](const lang::IntLit& l) { os << int_literal(l.value); },
                 [&](const lang::BoolLit& b) { os << (b.value ? "true" : "false"); },
                 [&](const lang::ProgVar& v) { os << smt_quote(v.name); },
                 [&](const lang::LogicVar& v) {
                   os << smt_quote(smt_symbol({v.name, v.index, e.sort()}));
                 },
                 [&](const lang::Unary& u) {
                   os << (u.op == lang::UnaryOp::Neg ? "(- " : "(not ");
                   emit(os, u.arg);
                   os << ')';
                 },
                 [&](const lang::Binary& b) {
                   os << '(' << op_symbol(b.op) << ' ';
                   emit(os, b.lhs);
                   os << ' ';
                   emit(os, b.rhs);
                   os << ')';
                 },
             },
             e.node().kind);
}

bool is_int_literal(const Expr& e) {
  if (std::holds_alternative<lang::IntLit>(e.node().kind)) return true;
  if (auto* u = std::get_if<lang::Unary>(&e.node().kind)) return is_int_literal(u->arg);
  return false;
}

bool nonlinear(const Expr& e) {
  return std::visit(overloaded{
                        [&](const lang::Unary& u) { return nonlinear(u.arg); },
                        [&](const lang::Binary& b) {
                          if (b.op == BinaryOp::Mul && !is_int_literal(b.lhs) &&
                              !is_int_literal(b.rhs)) {
                            return true;
                          }
                          if ((b.op == BinaryOp::Div || b.op == BinaryOp::Mod) &&
                              !is_int_literal(b.rhs)) {
                            return true;
                          }
                          return nonlinear(b.lhs) || nonlinear(b.rhs);
                        },
                        [](const auto&) { return false; },
                    },
                    e.node().kind);
}

// Minimal s-expression reader for solver responses.
struct SExpr {
  bool atom = true;
  std::string text;
  std::vector<SExpr> items;
};

class Reader {
public:
  explicit Reader(std::string_view in) : in_(in) {}

  bool at_end() {
    skip();
    return pos_ >= in_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= in_.size()) throw MalformedModel("unexpected end of output");
    char c = in_[pos_];
    if (c == '(') {
      ++pos_;
      SExpr list;
      list.atom = false;
      for (;;) {
        skip();
        if (pos_ >= in_.size()) throw MalformedModel("unbalanced parenthesis");
        if (in_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    if (c == ')') throw MalformedModel("unexpected ')'");
    if (c == '|') {
      std::size_t end = in_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw MalformedModel("unterminated |symbol|");
      SExpr a;
      a.text = std::string(in_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return a;
    }
    if (c == '"') {
      std::size_t end = pos_ + 1;
      while (end < in_.size()) {
        if (in_[end] == '"') {
          if (end + 1 < in_.size() && in_[end + 1] == '"') {
            end += 2;
            continue;
          }
          break;
        }
        ++end;
      }
      if (end >= in_.size()) throw MalformedModel("unterminated string");
      SExpr a;
      a.text = std::string(in_.substr(pos_, end - pos_ + 1));
      pos_ = end + 1;
      return a;
    }
    std::size_t start = pos_;
    while (pos_ < in_.size() && !std::isspace(static_cast<unsigned char>(in_[pos_])) &&
           in_[pos_] != '(' && in_[pos_] != ')') {
      ++pos_;
    }
    SExpr a;
    a.text = std::string(in_.substr(start, pos_ - start));
    return a;
  }

private:
  void skip() {
    while (pos_ < in_.size()) {
      if (std::isspace(static_cast<unsigned char>(in_[pos_]))) {
        ++pos_;
      } else if (in_[pos_] == ';') {
        while (pos_ < in_.size() && in_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

lang::Value read_value(const SExpr& v, lang::Sort sort) {
  if (sort == lang::Sort::Bool) {
    if (v.atom && v.text == "true") return true;
    if (v.atom && v.text == "false") return false;
    throw MalformedModel("expected a boolean value");
  }
  auto numeral = [](const std::string& s) {
    if (s.empty()) throw MalformedModel("empty numeral");
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw MalformedModel("bad numeral '" + s + "'");
    }
    return lang::BigInt(s);
  };
  if (v.atom) return numeral(v.text);
  if (v.items.size() == 2 && v.items[0].atom && v.items[0].text == "-" && v.items[1].atom) {
    return lang::BigInt(-numeral(v.items[1].text));
  }
  throw MalformedModel("unsupported integer value");
}

} // namespace

std::string smt_symbol(const lang::LogicVarKey& key) {
  std::string out = key.name;
  if (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back()))) out += '_';
  out += std::to_string(key.index);
  return out;
}

std::string smt_quote(const std::string& symbol) {
  bool simple = !symbol.empty() && !std::isdigit(static_cast<unsigned char>(symbol[0]));
  for (char c : symbol) simple = simple && is_simple_char(c);
  if (simple && !reserved_words().count(symbol)) return symbol;
  return "|" + symbol + "|";
}

std::string to_smtlib(const Expr& f) {
  std::ostringstream os;
  os << "(set-logic " << (nonlinear(f) ? "QF_NIA" : "QF_LIA") << ")\n";
  for (const auto& key : lang::free_logic_vars(f)) {
    os << "(declare-const " << smt_quote(smt_symbol(key)) << ' '
       << (key.sort == lang::Sort::Int ? "Int" : "Bool") << ")\n";
  }
  os << "(assert ";
  emit(os, f);
  os << ")\n(check-sat)\n(get-model)\n";
  return os.str();
}

std::map<std::string, lang::LogicVarKey> smt_declarations(const Expr& f) {
  std::map<std::string, lang::LogicVarKey> out;
  for (const auto& key : lang::free_logic_vars(f)) out.emplace(smt_symbol(key), key);
  return out;
}

SatResult parse_response(std::string_view output,
                         const std::map<std::string, lang::LogicVarKey>& declarations) {
  Reader reader(output);
  if (reader.at_end()) throw MalformedModel("empty solver output");
  SExpr head = reader.read();
  // Anything but sat/unsat is unknown, including an (error ...) reply.
  if (!head.atom) return SatResult{Verdict::Unknown, std::nullopt, "solver replied without a verdict"};
  if (head.text == "unsat") return SatResult{Verdict::Unsat, std::nullopt, {}};
  if (head.text != "sat") {
    std::string note = head.text == "unknown" ? "solver returned unknown" : "solver said: " + head.text;
    return SatResult{Verdict::Unknown, std::nullopt, note};
  }
  if (reader.at_end()) throw MalformedModel("sat without a model");
  SExpr model = reader.read();
  if (model.atom) throw MalformedModel("expected a model");
  const std::vector<SExpr>* defs = &model.items;
  std::vector<SExpr> tail;
  if (!model.items.empty() && model.items[0].atom && model.items[0].text == "model") {
    tail.assign(model.items.begin() + 1, model.items.end());
    defs = &tail;
  } else if (!model.items.empty() && model.items[0].atom && model.items[0].text == "error") {
    throw MalformedModel("solver error in model");
  }
  Model out;
  for (const auto& def : *defs) {
    if (def.atom || def.items.size() != 5 || !def.items[0].atom ||
        def.items[0].text != "define-fun") {
      throw MalformedModel("expected (define-fun name () Sort value)");
    }
    const SExpr& name = def.items[1];
    if (!name.atom) throw MalformedModel("bad define-fun name");
    if (!def.items[2].atom && !def.items[2].items.empty()) continue;  // function symbols
    auto it = declarations.find(name.text);
    if (it == declarations.end()) continue;
    out[it->second] = read_value(def.items[4], it->second.sort);
  }
  return SatResult{Verdict::Sat, std::move(out), {}};
}

} // namespace verdap::solve
