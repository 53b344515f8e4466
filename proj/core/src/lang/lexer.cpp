#include "lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace verdap::lang::detail {

const char* describe(Tok kind) {
  switch (kind) {
  case Tok::Ident: return "identifier";
  case Tok::Int: return "integer literal";
  case Tok::KwVar: return "'var'";
  case Tok::KwProc: return "'proc'";
  case Tok::KwRequires: return "'requires'";
  case Tok::KwEnsures: return "'ensures'";
  case Tok::KwInt: return "'int'";
  case Tok::KwBool: return "'bool'";
  case Tok::KwAssume: return "'assume'";
  case Tok::KwAssert: return "'assert'";
  case Tok::KwIf: return "'if'";
  case Tok::KwElse: return "'else'";
  case Tok::KwWhile: return "'while'";
  case Tok::KwInvariant: return "'invariant'";
  case Tok::KwTrue: return "'true'";
  case Tok::KwFalse: return "'false'";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::LBrace: return "'{'";
  case Tok::RBrace: return "'}'";
  case Tok::Comma: return "','";
  case Tok::Semi: return "';'";
  case Tok::Colon: return "':'";
  case Tok::Assign: return "'='";
  case Tok::Implies: return "'==>'";
  case Tok::OrOr: return "'||'";
  case Tok::AndAnd: return "'&&'";
  case Tok::Bang: return "'!'";
  case Tok::EqEq: return "'=='";
  case Tok::NotEq: return "'!='";
  case Tok::Lt: return "'<'";
  case Tok::Le: return "'<='";
  case Tok::Gt: return "'>'";
  case Tok::Ge: return "'>='";
  case Tok::Plus: return "'+'";
  case Tok::Minus: return "'-'";
  case Tok::Star: return "'*'";
  case Tok::Slash: return "'/'";
  case Tok::Percent: return "'%'";
  case Tok::End: return "end of input";
  case Tok::Invalid: return "invalid character";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view src) {
  static const std::unordered_map<std::string_view, Tok> keywords = {
      {"var", Tok::KwVar},         {"proc", Tok::KwProc},     {"requires", Tok::KwRequires},
      {"ensures", Tok::KwEnsures}, {"int", Tok::KwInt},       {"bool", Tok::KwBool},
      {"assume", Tok::KwAssume},   {"assert", Tok::KwAssert}, {"if", Tok::KwIf},
      {"else", Tok::KwElse},       {"while", Tok::KwWhile},   {"invariant", Tok::KwInvariant},
      {"true", Tok::KwTrue},       {"false", Tok::KwFalse},
  };
  // Longest operators first.
  static const std::pair<std::string_view, Tok> operators[] = {
      {"==>", Tok::Implies}, {"||", Tok::OrOr}, {"&&", Tok::AndAnd}, {"==", Tok::EqEq},
      {"!=", Tok::NotEq},    {"<=", Tok::Le},   {">=", Tok::Ge},     {"(", Tok::LParen},
      {")", Tok::RParen},    {"{", Tok::LBrace}, {"}", Tok::RBrace}, {",", Tok::Comma},
      {";", Tok::Semi},      {":", Tok::Colon}, {"=", Tok::Assign},  {"!", Tok::Bang},
      {"<", Tok::Lt},        {">", Tok::Gt},    {"+", Tok::Plus},    {"-", Tok::Minus},
      {"*", Tok::Star},      {"/", Tok::Slash}, {"%", Tok::Percent},
  };

  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line;
    int tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      std::string_view word = src.substr(i, j - i);
      auto kw = keywords.find(word);
      out.push_back({kw == keywords.end() ? Tok::Ident : kw->second, std::string(word), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& [text, kind] : operators) {
      if (src.substr(i, text.size()) == text) {
        out.push_back({kind, std::string(text), tl, tc});
        advance(text.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    std::size_t len = 1;
    unsigned char lead = static_cast<unsigned char>(c);
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    out.push_back({Tok::Invalid, std::string(src.substr(i, len)), tl, tc});
    advance(len);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

} // namespace verdap::lang::detail
