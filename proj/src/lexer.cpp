#include "refix/lexer.hpp"

#include <cctype>
#include <unordered_set>

namespace refix {

namespace {

const std::unordered_set<std::string> kKeywords = {
    "abstract", "boolean", "break",      "byte",   "case",     "catch",
    "char",     "class",   "continue",   "default", "do",      "double",
    "else",     "enum",    "extends",    "final",  "finally",  "float",
    "for",      "if",      "implements", "import", "instanceof", "int",
    "interface", "long",   "native",     "new",    "null",     "package",
    "private",  "protected", "public",   "return", "short",    "static",
    "super",    "switch",  "synchronized", "this", "throw",    "throws",
    "transient", "true",   "try",        "false",  "void",     "volatile",
    "while"};

const std::unordered_set<std::string> kPrimitives = {
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "void"};

const std::unordered_set<std::string> kModifiers = {
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "native", "transient", "volatile"};

// Longest-match symbol table, probed from 4 chars down to 1.
const std::unordered_set<std::string> kSymbols = {
    ">>>=", ">>>", ">>=", "<<=", "->",  "::",  "==", "!=", "<=", ">=", "&&",
    "||",   "++",  "--",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=",
    "<<",   ">>",  "+",   "-",   "*",   "/",   "%",  "=",  "<",  ">",  "!",
    "&",    "|",   "^",   "~",   "?",   ":",   ";",  ",",  ".",  "(",  ")",
    "{",    "}",   "[",   "]",   "@"};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool identPart(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

} // namespace

bool isKeywordText(const std::string &s) { return kKeywords.count(s) > 0; }
bool isPrimitiveType(const std::string &s) { return kPrimitives.count(s) > 0; }
bool isModifier(const std::string &s) { return kModifiers.count(s) > 0; }

std::vector<Token> tokenize(const SourceText &src) {
  const std::string &t = src.text();
  const int n = src.size();
  std::vector<Token> out;
  int i = 0;

  auto push = [&](TokenKind kind, int begin, int end) {
    Token tok;
    tok.kind = kind;
    tok.text = t.substr(begin, end - begin);
    tok.offset = begin;
    tok.length = end - begin;
    tok.line = src.lineOf(begin);
    tok.col = src.colOf(begin);
    out.push_back(std::move(tok));
  };

  while (i < n) {
    char c = t[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    // Comments vanish entirely; they carry no grammar weight downstream.
    if (c == '/' && i + 1 < n && t[i + 1] == '/') {
      while (i < n && t[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && t[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(t[i] == '*' && t[i + 1] == '/')) ++i;
      i = (i + 1 < n) ? i + 2 : n;
      continue;
    }
    if (identStart(c)) {
      int b = i;
      while (i < n && identPart(t[i])) ++i;
      std::string word = t.substr(b, i - b);
      push(isKeywordText(word) ? TokenKind::Keyword : TokenKind::Identifier, b, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int b = i;
      if (c == '0' && i + 1 < n && (t[i + 1] == 'x' || t[i + 1] == 'X')) {
        i += 2;
        while (i < n && std::isxdigit(static_cast<unsigned char>(t[i]))) ++i;
      } else {
        while (i < n && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        if (i < n && t[i] == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(t[i + 1]))) {
          ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        }
      }
      while (i < n && (t[i] == 'l' || t[i] == 'L' || t[i] == 'f' || t[i] == 'F' ||
                       t[i] == 'd' || t[i] == 'D'))
        ++i;
      push(TokenKind::Number, b, i);
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      int b = i++;
      bool closed = false;
      while (i < n) {
        if (t[i] == '\\' && i + 1 < n) {
          i += 2;
          continue;
        }
        if (t[i] == quote) {
          ++i;
          closed = true;
          break;
        }
        if (t[i] == '\n') break;
        ++i;
      }
      push(closed ? (quote == '"' ? TokenKind::String : TokenKind::Char) : TokenKind::Invalid, b, i);
      continue;
    }
    // Two or more consecutive dots form a placeholder ellipsis, not syntax.
    if (c == '.' && i + 1 < n && t[i + 1] == '.') {
      int b = i;
      while (i < n && t[i] == '.') ++i;
      push(TokenKind::Invalid, b, i);
      continue;
    }
    bool matched = false;
    for (int len = 4; len >= 1; --len) {
      if (i + len > n) continue;
      std::string cand = t.substr(i, len);
      if (kSymbols.count(cand)) {
        push(TokenKind::Symbol, i, i + len);
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    // Junk: take a maximal run of characters no rule recognizes.
    int b = i;
    while (i < n) {
      char d = t[i];
      if (std::isspace(static_cast<unsigned char>(d)) || identStart(d) ||
          std::isdigit(static_cast<unsigned char>(d)) || d == '"' || d == '\'' ||
          kSymbols.count(std::string(1, d)))
        break;
      ++i;
    }
    if (i == b) ++i;
    push(TokenKind::Invalid, b, i);
  }

  Token eof;
  eof.kind = TokenKind::End;
  eof.offset = n;
  eof.length = 0;
  eof.line = src.lineOf(n == 0 ? 0 : n - 1);
  eof.col = n == 0 ? 1 : src.colOf(n - 1) + 1;
  if (n > 0 && t[n - 1] == '\n') {
    eof.line = src.lineCount();
    eof.col = 1;
  }
  out.push_back(std::move(eof));
  return out;
}

} // namespace refix
