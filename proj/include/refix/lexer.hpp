#pragma once

#include "refix/source.hpp"

#include <string>
#include <vector>

namespace refix {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  String,
  Char,
  Symbol,  // operators and punctuation
  Invalid, // ellipsis runs, unterminated literals, junk characters
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int offset = 0;
  int length = 0;
  int line = 1;
  int col = 1;

  bool is(TokenKind k) const { return kind == k; }
  bool is(const char *t) const { return text == t; }
  bool isSymbol(const char *t) const { return kind == TokenKind::Symbol && text == t; }
  bool isKeyword(const char *t) const { return kind == TokenKind::Keyword && text == t; }
};

bool isKeywordText(const std::string &s);
bool isPrimitiveType(const std::string &s);
bool isModifier(const std::string &s);

// Total: never throws; malformed input becomes Invalid tokens. Comments and
// whitespace are dropped. The final element is always an End token.
std::vector<Token> tokenize(const SourceText &src);

} // namespace refix
