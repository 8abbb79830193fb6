#pragma once

#include "refix/lexer.hpp"
#include "refix/source.hpp"

#include <optional>
#include <string>
#include <vector>

namespace refix {

enum class AstKind {
  Unit,
  ClassDecl,
  MethodDecl,
  FieldDecl,
  Param,
  Block,
  LocalDecl,
  ExprStmt,
  AssignStmt,
  IfStmt,
  WhileStmt,
  ForStmt,
  ForEachStmt,
  TryStmt,
  CatchClause,
  FinallyClause,
  ReturnStmt,
  ThrowStmt,
  BreakStmt,
  ContinueStmt,
  EmptyStmt,
  Annotation,
  CallExpr,
  FieldAccess,
  CastExpr,
  NewObjectExpr,
  NewArrayExpr,
  IndexExpr,
  LiteralExpr,
  NameExpr,
  BinaryExpr,
  UnaryExpr,
  ParenExpr,
  TypeRef,
  BadExpr,
  BadStmt,
};

const char *astKindName(AstKind k);

// Child layout is positional per kind:
//   LocalDecl/FieldDecl: TypeRef, NameExpr, [init]
//   AssignStmt:          lhs, rhs                       (text = operator)
//   MethodDecl:          TypeRef, Param*, [Block]       (text = name)
//   IfStmt:              cond, then, [else]
//   WhileStmt:           cond, body
//   ForStmt:             init, cond, update*, body      (EmptyStmt placeholders)
//   ForEachStmt:         TypeRef, NameExpr, iterable, body
//   TryStmt:             Block, CatchClause*, [FinallyClause]
//   CatchClause:         TypeRef, Block                 (text = param name)
//   CallExpr:            [receiver], arg*               (text = callee, flag = hasReceiver)
//   CastExpr:            TypeRef, operand               (text = type)
//   NewObjectExpr:       TypeRef, arg*                  (text = type)
//   NewArrayExpr:        TypeRef, dim/init exprs        (text = type, flag = braced init)
//   IndexExpr:           array, index
//   BinaryExpr:          lhs, rhs                       (text = operator)
//   UnaryExpr:           operand                        (text = operator, flag = postfix)
struct AstNode {
  AstKind kind = AstKind::BadStmt;
  int firstTok = -1;
  int lastTok = -1;
  int parent = -1;
  std::vector<int> children;
  std::string text;
  bool flag = false;
};

enum class ErrorCategory { InvalidToken, MissingToken, ExtraToken };
enum class ExpectKind { None, Symbol, Rule };

struct ParseError {
  ErrorCategory category = ErrorCategory::InvalidToken;
  std::string tokenText; // offending token text; empty when a token is missing
  int line = 1;
  int col = 1;
  int offset = 0; // insertion point (missing) or token start (invalid/extra)
  int length = 0; // 0 when missing
  ExpectKind expectKind = ExpectKind::None;
  std::string expected; // symbol spelling or rule name
  std::string typeHint; // declared type of the value being parsed, when known
};

std::string describe(const ParseError &e);

struct SyntaxTree {
  SourcePtr src;
  std::vector<Token> tokens;
  std::vector<AstNode> nodes;
  int root = -1;
  std::vector<ParseError> errors;

  const AstNode &node(int id) const { return nodes[id]; }
  Span tokenSpan(int firstTok, int lastTok) const;
  Span nodeSpan(int id) const;
  int nodeLine(int id) const;
  std::string nodeText(int id) const; // whitespace-collapsed source slice
};

struct ParseOptions {
  bool allowAnnotations = false; // pattern files carry @Abstract annotations
};

// Total: always returns a tree; syntax problems are reported in tree.errors,
// ordered by position. Fragments (bare statement sequences) parse natively.
SyntaxTree parseUnit(SourcePtr src, ParseOptions opts = {});

// Collapse whitespace runs to single spaces and trim.
std::string collapseWs(const std::string &s);

} // namespace refix
