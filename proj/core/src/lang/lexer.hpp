#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace verdap::lang::detail {

enum class Tok {
  Ident, Int,
  KwVar, KwProc, KwRequires, KwEnsures, KwInt, KwBool, KwAssume, KwAssert,
  KwIf, KwElse, KwWhile, KwInvariant, KwTrue, KwFalse,
  LParen, RParen, LBrace, RBrace, Comma, Semi, Colon, Assign,
  Implies, OrOr, AndAnd, Bang, EqEq, NotEq, Lt, Le, Gt, Ge,
  Plus, Minus, Star, Slash, Percent,
  End, Invalid,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok kind);

/// Splits `source` into tokens; always ends with an End token. A lexical
/// error becomes an Invalid token carrying the offending text.
std::vector<Token> tokenize(std::string_view source);

} // namespace verdap::lang::detail
