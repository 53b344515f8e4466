#include "verdap/lang/parser.hpp"

#include <sstream>

#include "checker.hpp"
#include "lexer.hpp"

namespace verdap::lang {

namespace {

using detail::Tok;
using detail::Token;

struct SyntaxFailure {
  Diagnostic diag;
};

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string file)
      : toks_(std::move(tokens)), file_(std::move(file)) {}

  TranslationUnit unit() {
    TranslationUnit tu;
    tu.file = file_;
    while (!at(Tok::End)) {
      if (at(Tok::KwVar)) {
        tu.globals.push_back(global());
      } else if (at(Tok::KwProc)) {
        tu.procedures.push_back(procedure());
      } else {
        fail({"'var'", "'proc'"});
      }
    }
    return tu;
  }

  Expr standalone_expr() {
    Expr e = expr();
    expect(Tok::End);
    return e;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }

  SourceLoc loc(const Token& t) const { return SourceLoc{file_, t.line, t.column}; }
  static Pos pos(const Token& t) { return Pos{t.line, t.column}; }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = peek();
    std::ostringstream msg;
    if (t.kind == Tok::Invalid) {
      msg << "unexpected character '" << t.text << "'";
    } else {
      msg << "unexpected " << (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'");
    }
    msg << ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
      msg << expected[i];
    }
    throw SyntaxFailure{Diagnostic{Diagnostic::Kind::Syntax, loc(t), msg.str(), std::move(expected)}};
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({detail::describe(k)});
    return toks_[pos_++];
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  Sort sort() {
    if (accept(Tok::KwInt)) return Sort::Int;
    if (accept(Tok::KwBool)) return Sort::Bool;
    fail({"'int'", "'bool'"});
  }

  Global global() {
    const Token& kw = expect(Tok::KwVar);
    std::string name = expect(Tok::Ident).text;
    expect(Tok::Colon);
    Sort s = sort();
    expect(Tok::Assign);
    Expr init = expr();
    expect(Tok::Semi);
    return Global{std::move(name), s, init, loc(kw)};
  }

  Procedure procedure() {
    Procedure p;
    const Token& kw = expect(Tok::KwProc);
    p.loc = loc(kw);
    p.precondition_loc = p.loc;
    p.postcondition_loc = p.loc;
    p.name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      do {
        std::string name = expect(Tok::Ident).text;
        expect(Tok::Colon);
        p.params.push_back(Param{std::move(name), sort()});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen);
    if (accept(Tok::Colon)) p.return_sort = sort();
    if (at(Tok::KwRequires)) {
      p.precondition_loc = loc(peek());
      ++pos_;
      p.precondition = expr();
      p.has_precondition = true;
      expect(Tok::Semi);
    }
    if (at(Tok::KwEnsures)) {
      p.postcondition_loc = loc(peek());
      ++pos_;
      p.postcondition = expr();
      p.has_postcondition = true;
      expect(Tok::Semi);
    }
    p.body = block();
    return p;
  }

  StmtList block() {
    expect(Tok::LBrace);
    StmtList out;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail({"'}'"});
      out.push_back(stmt());
    }
    expect(Tok::RBrace);
    return out;
  }

  Stmt stmt() {
    const Token& first = peek();
    SourceLoc where = loc(first);
    switch (first.kind) {
    case Tok::KwVar: {
      ++pos_;
      std::string name = expect(Tok::Ident).text;
      expect(Tok::Colon);
      Sort s = sort();
      expect(Tok::Assign);
      Expr init = expr();
      expect(Tok::Semi);
      return make_stmt(LocalDecl{std::move(name), s, init}, where);
    }
    case Tok::KwAssume: {
      ++pos_;
      Expr c = expr();
      expect(Tok::Semi);
      return make_stmt(Assume{c}, where);
    }
    case Tok::KwAssert: {
      ++pos_;
      Expr c = expr();
      expect(Tok::Semi);
      return make_stmt(Assert{c}, where);
    }
    case Tok::KwIf: {
      ++pos_;
      expect(Tok::LParen);
      Expr c = expr();
      expect(Tok::RParen);
      StmtList then_body = block();
      StmtList else_body;
      if (accept(Tok::KwElse)) else_body = block();
      return make_stmt(If{c, std::move(then_body), std::move(else_body)}, where);
    }
    case Tok::KwWhile: {
      ++pos_;
      expect(Tok::LParen);
      Expr c = expr();
      expect(Tok::RParen);
      SourceLoc inv_loc = loc(peek());
      expect(Tok::KwInvariant);
      Expr inv = expr();
      expect(Tok::Semi);
      StmtList body = block();
      return make_stmt(While{c, inv, std::move(body), inv_loc}, where);
    }
    case Tok::Ident: {
      if (peek(1).kind == Tok::LParen) {
        return make_stmt(call(std::nullopt), where);
      }
      std::string target = first.text;
      ++pos_;
      expect(Tok::Assign);
      if (at(Tok::Ident) && peek(1).kind == Tok::LParen) {
        return make_stmt(call(std::move(target)), where);
      }
      Expr rhs = expr();
      expect(Tok::Semi);
      return make_stmt(Assign{std::move(target), rhs}, where);
    }
    default:
      fail({"statement"});
    }
  }

  Call call(std::optional<std::string> result) {
    Call c;
    c.result = std::move(result);
    c.callee = expect(Tok::Ident).text;
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      do {
        c.args.push_back(expr());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen);
    expect(Tok::Semi);
    return c;
  }

  // Precedence climbing, lowest first: ==> (right), ||, &&, == !=,
  // relational, additive, multiplicative, unary.
  Expr expr() { return implication(); }

  Expr implication() {
    Expr lhs = disjunction();
    if (at(Tok::Implies)) {
      Pos p = pos(peek());
      ++pos_;
      Expr rhs = implication();
      return Expr::binary(BinaryOp::Implies, lhs, rhs, p);
    }
    return lhs;
  }

  template <class Next>
  Expr left_assoc(Next next, std::initializer_list<std::pair<Tok, BinaryOp>> ops) {
    Expr lhs = (this->*next)();
    for (;;) {
      bool matched = false;
      for (const auto& [tok, op] : ops) {
        if (at(tok)) {
          Pos p = pos(peek());
          ++pos_;
          Expr rhs = (this->*next)();
          lhs = Expr::binary(op, lhs, rhs, p);
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  Expr disjunction() { return left_assoc(&Parser::conjunction, {{Tok::OrOr, BinaryOp::Or}}); }
  Expr conjunction() { return left_assoc(&Parser::equality, {{Tok::AndAnd, BinaryOp::And}}); }
  Expr equality() {
    return left_assoc(&Parser::relational,
                      {{Tok::EqEq, BinaryOp::Eq}, {Tok::NotEq, BinaryOp::Ne}});
  }
  Expr relational() {
    return left_assoc(&Parser::additive, {{Tok::Lt, BinaryOp::Lt},
                                          {Tok::Le, BinaryOp::Le},
                                          {Tok::Gt, BinaryOp::Gt},
                                          {Tok::Ge, BinaryOp::Ge}});
  }
  Expr additive() {
    return left_assoc(&Parser::multiplicative,
                      {{Tok::Plus, BinaryOp::Add}, {Tok::Minus, BinaryOp::Sub}});
  }
  Expr multiplicative() {
    return left_assoc(&Parser::unary, {{Tok::Star, BinaryOp::Mul},
                                       {Tok::Slash, BinaryOp::Div},
                                       {Tok::Percent, BinaryOp::Mod}});
  }

  Expr unary() {
    if (at(Tok::Minus) || at(Tok::Bang)) {
      Pos p = pos(peek());
      UnaryOp op = at(Tok::Minus) ? UnaryOp::Neg : UnaryOp::Not;
      ++pos_;
      return Expr::unary(op, unary(), p);
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::Int:
      ++pos_;
      return Expr::int_lit(BigInt(t.text), pos(t));
    case Tok::KwTrue:
      ++pos_;
      return Expr::bool_lit(true, pos(t));
    case Tok::KwFalse:
      ++pos_;
      return Expr::bool_lit(false, pos(t));
    case Tok::Ident:
      ++pos_;
      return Expr::prog_var(t.text, Sort::Int, pos(t));
    case Tok::LParen: {
      ++pos_;
      Expr e = expr();
      expect(Tok::RParen);
      return e;
    }
    default:
      fail({"expression"});
    }
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
};

} // namespace

const char* kind_name(Diagnostic::Kind kind) {
  switch (kind) {
  case Diagnostic::Kind::Syntax: return "syntax error";
  case Diagnostic::Kind::Type: return "type error";
  case Diagnostic::Kind::Resolution: return "resolution error";
  }
  return "error";
}

std::string to_string(const Diagnostic& d) {
  return to_string(d.loc) + ": " + kind_name(d.kind) + ": " + d.message;
}

ParseResult parse_program(std::string_view source, const std::string& file) {
  ParseResult result;
  TranslationUnit raw;
  try {
    raw = Parser(detail::tokenize(source), file).unit();
  } catch (SyntaxFailure& f) {
    result.diagnostics.push_back(std::move(f.diag));
    return result;
  }
  result.unit = detail::check_unit(raw, result.diagnostics);
  return result;
}

ExprParseResult parse_expression(std::string_view text, const SortEnv& env) {
  ExprParseResult result;
  std::optional<Expr> raw;
  try {
    raw = Parser(detail::tokenize(text), "<expression>").standalone_expr();
  } catch (SyntaxFailure& f) {
    result.diagnostics.push_back(std::move(f.diag));
    return result;
  }
  result.expr = detail::check_standalone(*raw, "<expression>", env, result.diagnostics);
  return result;
}

} // namespace verdap::lang
