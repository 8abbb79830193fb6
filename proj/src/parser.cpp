#include "refix/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace refix {

const char *astKindName(AstKind k) {
  switch (k) {
  case AstKind::Unit: return "unit";
  case AstKind::ClassDecl: return "classDecl";
  case AstKind::MethodDecl: return "methodDecl";
  case AstKind::FieldDecl: return "fieldDecl";
  case AstKind::Param: return "param";
  case AstKind::Block: return "block";
  case AstKind::LocalDecl: return "localDecl";
  case AstKind::ExprStmt: return "exprStmt";
  case AstKind::AssignStmt: return "assignStmt";
  case AstKind::IfStmt: return "ifStmt";
  case AstKind::WhileStmt: return "whileStmt";
  case AstKind::ForStmt: return "forStmt";
  case AstKind::ForEachStmt: return "forEachStmt";
  case AstKind::TryStmt: return "tryStmt";
  case AstKind::CatchClause: return "catchClause";
  case AstKind::FinallyClause: return "finallyClause";
  case AstKind::ReturnStmt: return "returnStmt";
  case AstKind::ThrowStmt: return "throwStmt";
  case AstKind::BreakStmt: return "breakStmt";
  case AstKind::ContinueStmt: return "continueStmt";
  case AstKind::EmptyStmt: return "emptyStmt";
  case AstKind::Annotation: return "annotation";
  case AstKind::CallExpr: return "callExpr";
  case AstKind::FieldAccess: return "fieldAccess";
  case AstKind::CastExpr: return "castExpr";
  case AstKind::NewObjectExpr: return "newObjectExpr";
  case AstKind::NewArrayExpr: return "newArrayExpr";
  case AstKind::IndexExpr: return "indexExpr";
  case AstKind::LiteralExpr: return "literalExpr";
  case AstKind::NameExpr: return "nameExpr";
  case AstKind::BinaryExpr: return "binaryExpr";
  case AstKind::UnaryExpr: return "unaryExpr";
  case AstKind::ParenExpr: return "parenExpr";
  case AstKind::TypeRef: return "typeRef";
  case AstKind::BadExpr: return "badExpr";
  case AstKind::BadStmt: return "badStmt";
  }
  return "?";
}

std::string collapseWs(const std::string &s) {
  std::string out;
  bool pendingSpace = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pendingSpace = true;
      continue;
    }
    if (pendingSpace) {
      out.push_back(' ');
      pendingSpace = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string describe(const ParseError &e) {
  std::ostringstream os;
  switch (e.category) {
  case ErrorCategory::InvalidToken: os << "invalid token"; break;
  case ErrorCategory::MissingToken: os << "missing token"; break;
  case ErrorCategory::ExtraToken: os << "extra token"; break;
  }
  if (!e.tokenText.empty()) os << " '" << e.tokenText << "'";
  os << " at " << e.line << ":" << e.col;
  if (e.expectKind == ExpectKind::Symbol)
    os << ", expected '" << e.expected << "'";
  else if (e.expectKind == ExpectKind::Rule)
    os << ", expected " << e.expected;
  return os.str();
}

Span SyntaxTree::tokenSpan(int firstTok, int lastTok) const {
  if (firstTok < 0 || lastTok < firstTok) return {};
  const Token &a = tokens[firstTok];
  const Token &b = tokens[lastTok];
  return {a.offset, b.offset + b.length};
}

Span SyntaxTree::nodeSpan(int id) const {
  const AstNode &n = nodes[id];
  return tokenSpan(n.firstTok, n.lastTok);
}

int SyntaxTree::nodeLine(int id) const {
  const AstNode &n = nodes[id];
  return n.firstTok >= 0 ? tokens[n.firstTok].line : 1;
}

std::string SyntaxTree::nodeText(int id) const {
  return collapseWs(src->slice(nodeSpan(id)));
}

namespace {

bool startsOperand(const Token &t) {
  if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Number ||
      t.kind == TokenKind::String || t.kind == TokenKind::Char)
    return true;
  if (t.kind == TokenKind::Keyword)
    return t.text == "new" || t.text == "true" || t.text == "false" ||
           t.text == "null" || t.text == "this" || t.text == "super";
  if (t.kind == TokenKind::Symbol)
    return t.text == "(" || t.text == "!" || t.text == "~";
  return false;
}

class Parser {
public:
  Parser(SourcePtr src, ParseOptions opts)
      : src_(std::move(src)), opts_(opts), tokens_(tokenize(*src_)) {}

  SyntaxTree run() {
    int root = make(AstKind::Unit, 0);
    while (!at(TokenKind::End)) {
      int before = pos_;
      int el = parseElement();
      if (el >= 0) nodes_[root].children.push_back(el);
      if (pos_ == before) {
        // Guarantee progress: drop a token no rule consumed.
        extraHere();
        ++pos_;
      }
    }
    finish(root, pos_ - 1);
    if (nodes_[root].children.empty()) nodes_[root].firstTok = nodes_[root].lastTok = -1;

    SyntaxTree tree;
    tree.src = src_;
    tree.tokens = std::move(tokens_);
    tree.nodes = std::move(nodes_);
    tree.root = root;
    for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i)
      for (int c : tree.nodes[i].children) tree.nodes[c].parent = i;
    std::stable_sort(errors_.begin(), errors_.end(),
                     [](const ParseError &a, const ParseError &b) { return a.offset < b.offset; });
    tree.errors = std::move(errors_);
    return tree;
  }

private:
  SourcePtr src_;
  ParseOptions opts_;
  std::vector<Token> tokens_;
  std::vector<AstNode> nodes_;
  std::vector<ParseError> errors_;
  int pos_ = 0;
  std::string typeHint_;

  const Token &tok(int i) const { return tokens_[std::min(i, static_cast<int>(tokens_.size()) - 1)]; }
  const Token &cur() const { return tok(pos_); }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at(const char *t) const { return cur().text == t && cur().kind != TokenKind::String; }
  bool atSym(const char *t) const { return cur().isSymbol(t); }
  bool atKw(const char *t) const { return cur().isKeyword(t); }

  int make(AstKind k, int firstTok) {
    AstNode n;
    n.kind = k;
    n.firstTok = firstTok;
    n.lastTok = firstTok;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  void finish(int id, int lastTok) {
    nodes_[id].lastTok = std::max(nodes_[id].firstTok, lastTok);
  }
  void adopt(int id, int child) {
    if (child >= 0) nodes_[id].children.push_back(child);
  }

  // --- error reporting ------------------------------------------------

  void report(ErrorCategory cat, const Token &t, ExpectKind ek, std::string expected,
              bool missing = false) {
    ParseError e;
    e.category = cat;
    e.expectKind = ek;
    e.expected = std::move(expected);
    e.typeHint = typeHint_;
    if (missing) {
      // Insertion point: right after the previous token.
      int off = pos_ > 0 ? tok(pos_ - 1).offset + tok(pos_ - 1).length : 0;
      e.offset = off;
      e.length = 0;
      int probe = std::max(0, std::min(off, src_->size() - 1));
      e.line = src_->size() > 0 ? src_->lineOf(probe) : 1;
      e.col = off - src_->lineStart(e.line) + 1;
    } else {
      e.tokenText = t.text;
      e.offset = t.offset;
      e.length = t.length;
      e.line = t.line;
      e.col = t.col;
    }
    errors_.push_back(std::move(e));
  }

  void invalidHere(const char *ruleCtx) {
    report(ErrorCategory::InvalidToken, cur(), ExpectKind::Rule, ruleCtx);
  }
  void extraHere() { report(ErrorCategory::ExtraToken, cur(), ExpectKind::None, ""); }
  void missingSymbol(const char *sym) {
    report(ErrorCategory::MissingToken, cur(), ExpectKind::Symbol, sym, true);
  }
  void missingRule(const char *rule) {
    report(ErrorCategory::MissingToken, cur(), ExpectKind::Rule, rule, true);
  }

  // Consume sym or record a missing-token error (virtual insert).
  bool expectSym(const char *sym) {
    if (atSym(sym)) {
      ++pos_;
      return true;
    }
    missingSymbol(sym);
    return false;
  }

  void skipToStatementBoundary() {
    int depth = 0;
    while (!at(TokenKind::End)) {
      if (atSym("{")) ++depth;
      if (atSym("}")) {
        if (depth == 0) return;
        --depth;
      }
      if (atSym(";") && depth == 0) {
        ++pos_;
        return;
      }
      ++pos_;
    }
  }

  // --- type scanning ---------------------------------------------------

  struct TypeScan {
    int end;          // first token after the type
    std::string text; // token texts joined without separators
  };

  // Never consumes; returns nullopt when no type starts at `from`.
  std::optional<TypeScan> scanType(int from) const {
    int i = from;
    const Token &t0 = tok(i);
    std::string text;
    if (t0.kind == TokenKind::Keyword && isPrimitiveType(t0.text)) {
      text = t0.text;
      ++i;
    } else if (t0.kind == TokenKind::Identifier) {
      text = t0.text;
      ++i;
      while (tok(i).isSymbol(".") && tok(i + 1).kind == TokenKind::Identifier) {
        text += "." + tok(i + 1).text;
        i += 2;
      }
    } else {
      return std::nullopt;
    }
    // Optional generic section; on imbalance the base type alone stands.
    if (tok(i).isSymbol("<")) {
      int j = i + 1;
      int depth = 1;
      std::string gen = "<";
      bool ok = false;
      while (depth > 0) {
        const Token &t = tok(j);
        if (t.kind == TokenKind::End) break;
        if (t.isSymbol("<")) depth += 1;
        else if (t.isSymbol(">")) depth -= 1;
        else if (t.isSymbol(">>")) depth -= 2;
        else if (t.isSymbol(">>>")) depth -= 3;
        else if (t.kind == TokenKind::Identifier || t.isSymbol(",") || t.isSymbol(".") ||
                 t.isSymbol("?") || t.isSymbol("[") || t.isSymbol("]") ||
                 t.isKeyword("extends") || t.isKeyword("super") ||
                 (t.kind == TokenKind::Keyword && isPrimitiveType(t.text))) {
          // still inside a plausible type argument list
        } else {
          break;
        }
        gen += t.text;
        ++j;
        if (depth <= 0) {
          ok = depth == 0;
          break;
        }
      }
      if (ok) {
        text += gen;
        i = j;
      }
    }
    while (tok(i).isSymbol("[") && tok(i + 1).isSymbol("]")) {
      text += "[]";
      i += 2;
    }
    return TypeScan{i, text};
  }

  int makeTypeRef(const TypeScan &ts, int firstTok) {
    int id = make(AstKind::TypeRef, firstTok);
    nodes_[id].text = ts.text;
    finish(id, ts.end - 1);
    pos_ = ts.end;
    return id;
  }

  // --- top level ---------------------------------------------------------

  int parseElement() {
    if (atSym("@")) {
      if (opts_.allowAnnotations) return parseAnnotation();
      extraHere();
      ++pos_;
      return -1;
    }
    if (atSym("}")) {
      extraHere();
      ++pos_;
      return -1;
    }
    if (atKw("import") || atKw("package")) {
      int start = pos_;
      int id = make(AstKind::EmptyStmt, start);
      while (!at(TokenKind::End) && !atSym(";")) ++pos_;
      if (atSym(";")) ++pos_;
      finish(id, pos_ - 1);
      return id;
    }

    int start = pos_;
    int i = pos_;
    while (tok(i).kind == TokenKind::Keyword && isModifier(tok(i).text)) ++i;
    if (tok(i).isKeyword("class") || tok(i).isKeyword("interface") || tok(i).isKeyword("enum")) {
      pos_ = i;
      return parseClass(start);
    }
    if (auto ts = scanType(i)) {
      int afterType = ts->end;
      if (tok(afterType).kind == TokenKind::Identifier && tok(afterType + 1).isSymbol("(")) {
        pos_ = i;
        return parseMethod(start, *ts);
      }
    }
    pos_ = i; // modifiers on a plain statement are skipped silently
    return parseStatement();
  }

  int parseAnnotation() {
    int start = pos_;
    int id = make(AstKind::Annotation, start);
    ++pos_; // '@'
    if (at(TokenKind::Identifier)) {
      nodes_[id].text = cur().text;
      ++pos_;
    } else {
      missingRule("identifier");
    }
    if (atSym("(")) {
      int depth = 0;
      ++pos_;
      ++depth;
      int bodyFirst = pos_;
      while (!at(TokenKind::End) && depth > 0) {
        if (atSym("(")) ++depth;
        if (atSym(")")) --depth;
        if (depth > 0) ++pos_;
      }
      Span inner = {tok(bodyFirst).offset, cur().offset};
      nodes_[id].flag = true;
      // Interior stored verbatim for the pattern loader to pick apart.
      nodes_[id].text += "\x1f" + src_->slice(inner);
      expectSym(")");
    }
    finish(id, pos_ - 1);
    return id;
  }

  int parseClass(int startTok) {
    int id = make(AstKind::ClassDecl, startTok);
    ++pos_; // class/interface/enum
    if (at(TokenKind::Identifier)) {
      nodes_[id].text = cur().text;
      ++pos_;
    } else {
      missingRule("identifier");
    }
    while (atKw("extends") || atKw("implements")) {
      ++pos_;
      while (true) {
        if (auto ts = scanType(pos_)) pos_ = ts->end;
        else break;
        if (atSym(",")) ++pos_;
        else break;
      }
    }
    expectSym("{");
    while (!at(TokenKind::End) && !atSym("}")) {
      int before = pos_;
      int member = parseClassMember();
      adopt(id, member);
      if (pos_ == before) {
        extraHere();
        ++pos_;
      }
    }
    expectSym("}");
    finish(id, pos_ - 1);
    return id;
  }

  int parseClassMember() {
    if (atSym("@") && opts_.allowAnnotations) return parseAnnotation();
    int start = pos_;
    int i = pos_;
    while (tok(i).kind == TokenKind::Keyword && isModifier(tok(i).text)) ++i;
    if (tok(i).isKeyword("class") || tok(i).isKeyword("interface") || tok(i).isKeyword("enum")) {
      pos_ = i;
      return parseClass(start);
    }
    if (auto ts = scanType(i)) {
      int afterType = ts->end;
      if (tok(afterType).kind == TokenKind::Identifier) {
        if (tok(afterType + 1).isSymbol("(")) {
          pos_ = i;
          return parseMethod(start, *ts);
        }
        if (tok(afterType + 1).isSymbol("=") || tok(afterType + 1).isSymbol(";") ||
            tok(afterType + 1).isSymbol(",")) {
          pos_ = i;
          return parseVarDecl(AstKind::FieldDecl, start);
        }
      }
    }
    pos_ = i;
    return parseStatement();
  }

  int parseMethod(int startTok, const TypeScan &retType) {
    int id = make(AstKind::MethodDecl, startTok);
    int typeStart = pos_;
    adopt(id, makeTypeRef(retType, typeStart));
    if (at(TokenKind::Identifier)) {
      nodes_[id].text = cur().text;
      ++pos_;
    } else {
      missingRule("identifier");
    }
    expectSym("(");
    while (!at(TokenKind::End) && !atSym(")")) {
      int pstart = pos_;
      if (auto ts = scanType(pos_)) {
        int p = make(AstKind::Param, pstart);
        adopt(p, makeTypeRef(*ts, pstart));
        if (at(TokenKind::Identifier)) {
          nodes_[p].text = cur().text;
          ++pos_;
        } else {
          missingRule("identifier");
        }
        finish(p, pos_ - 1);
        adopt(id, p);
      } else {
        extraHere();
        ++pos_;
        continue;
      }
      if (atSym(",")) ++pos_;
      else break;
    }
    expectSym(")");
    if (atKw("throws")) {
      ++pos_;
      while (true) {
        if (auto ts = scanType(pos_)) pos_ = ts->end;
        else break;
        if (atSym(",")) ++pos_;
        else break;
      }
    }
    if (atSym(";")) {
      ++pos_;
    } else if (atSym("{")) {
      adopt(id, parseBlock());
    } else {
      missingRule("block");
    }
    finish(id, pos_ - 1);
    return id;
  }

  // --- statements ----------------------------------------------------

  int parseBlock() {
    int id = make(AstKind::Block, pos_);
    expectSym("{");
    while (!at(TokenKind::End) && !atSym("}")) {
      int before = pos_;
      adopt(id, parseStatement());
      if (pos_ == before) {
        extraHere();
        ++pos_;
      }
    }
    expectSym("}");
    finish(id, pos_ - 1);
    return id;
  }

  int parseStatement() {
    if (atSym("{")) return parseBlock();
    if (atSym(";")) {
      int id = make(AstKind::EmptyStmt, pos_);
      ++pos_;
      return id;
    }
    if (atKw("if")) return parseIf();
    if (atKw("while")) return parseWhile();
    if (atKw("for")) return parseFor();
    if (atKw("do")) return parseDoWhile();
    if (atKw("try")) return parseTry();
    if (atKw("return")) return parseReturn();
    if (atKw("throw")) return parseThrow();
    if (atKw("break") || atKw("continue")) {
      int id = make(atKw("break") ? AstKind::BreakStmt : AstKind::ContinueStmt, pos_);
      ++pos_;
      expectSemicolon();
      finish(id, pos_ - 1);
      return id;
    }
    if (at(TokenKind::Invalid)) {
      invalidHere("statement");
      int id = make(AstKind::BadStmt, pos_);
      ++pos_;
      // A broken statement may have trailing residue up to the boundary.
      if (atSym(";")) ++pos_;
      finish(id, pos_ - 1);
      return id;
    }
    if (isLocalDeclAhead()) return parseVarDecl(AstKind::LocalDecl, pos_);
    return parseExprOrAssign();
  }

  bool isLocalDeclAhead() const {
    auto ts = scanType(pos_);
    if (!ts) return false;
    const Token &next = tok(ts->end);
    if (next.kind != TokenKind::Identifier) return false;
    const Token &after = tok(ts->end + 1);
    return after.isSymbol("=") || after.isSymbol(";") || after.isSymbol(",");
  }

  int parseVarDecl(AstKind kind, int startTok) {
    auto ts = scanType(pos_);
    if (!ts) {
      missingRule("type");
      return parseExprOrAssign();
    }
    int typeTok = pos_;
    int typeRef = makeTypeRef(*ts, typeTok);
    int first = declarator(kind, startTok, typeRef);
    while (atSym(",")) {
      ++pos_;
      // Re-issue the TypeRef so each declarator owns its own child.
      int tr = make(AstKind::TypeRef, typeTok);
      nodes_[tr].text = nodes_[typeRef].text;
      nodes_[tr].lastTok = nodes_[typeRef].lastTok;
      declaratorInto(kind, pos_, tr);
    }
    expectSemicolon();
    finish(first, pos_ - 1);
    return first;
  }

  int declarator(AstKind kind, int startTok, int typeRef) {
    return declaratorInto(kind, startTok, typeRef);
  }

  int declaratorInto(AstKind kind, int startTok, int typeRef) {
    int id = make(kind, startTok);
    adopt(id, typeRef);
    int nameId = make(AstKind::NameExpr, pos_);
    if (at(TokenKind::Identifier)) {
      nodes_[nameId].text = cur().text;
      nodes_[id].text = cur().text;
      ++pos_;
    } else {
      missingRule("identifier");
    }
    finish(nameId, pos_ - 1);
    adopt(id, nameId);
    if (atSym("=")) {
      ++pos_;
      std::string saved = typeHint_;
      typeHint_ = nodes_[typeRef].text;
      adopt(id, parseExpression());
      typeHint_ = saved;
    }
    finish(id, pos_ - 1);
    return id;
  }

  void expectSemicolon() {
    if (atSym(";")) {
      ++pos_;
      return;
    }
    if (at(TokenKind::Invalid)) {
      // Trailing junk before the terminator: its own error, then resync.
      invalidHere("statement");
      ++pos_;
      if (atSym(";")) ++pos_;
      else missingSymbol(";");
      return;
    }
    missingSymbol(";");
  }

  int parseIf() {
    int id = make(AstKind::IfStmt, pos_);
    ++pos_;
    expectSym("(");
    adopt(id, parseExpression());
    expectSym(")");
    adopt(id, parseBody());
    if (atKw("else")) {
      ++pos_;
      adopt(id, parseBody());
    }
    finish(id, pos_ - 1);
    return id;
  }

  int parseWhile() {
    int id = make(AstKind::WhileStmt, pos_);
    ++pos_;
    expectSym("(");
    adopt(id, parseExpression());
    expectSym(")");
    adopt(id, parseBody());
    finish(id, pos_ - 1);
    return id;
  }

  int parseDoWhile() {
    int id = make(AstKind::WhileStmt, pos_);
    ++pos_;
    int body = parseBody();
    if (atKw("while")) ++pos_;
    else missingSymbol("while");
    expectSym("(");
    adopt(id, parseExpression());
    expectSym(")");
    expectSemicolon();
    adopt(id, body);
    finish(id, pos_ - 1);
    return id;
  }

  int parseFor() {
    int startTok = pos_;
    ++pos_;
    expectSym("(");
    // Enhanced form: for (Type name : iterable)
    if (auto ts = scanType(pos_)) {
      if (tok(ts->end).kind == TokenKind::Identifier && tok(ts->end + 1).isSymbol(":")) {
        int id = make(AstKind::ForEachStmt, startTok);
        int typeTok = pos_;
        adopt(id, makeTypeRef(*ts, typeTok));
        int nameId = make(AstKind::NameExpr, pos_);
        nodes_[nameId].text = cur().text;
        nodes_[id].text = cur().text;
        ++pos_;
        finish(nameId, pos_ - 1);
        adopt(id, nameId);
        ++pos_; // ':'
        adopt(id, parseExpression());
        expectSym(")");
        adopt(id, parseBody());
        finish(id, pos_ - 1);
        return id;
      }
    }
    int id = make(AstKind::ForStmt, startTok);
    if (atSym(";")) {
      int e = make(AstKind::EmptyStmt, pos_);
      ++pos_;
      adopt(id, e);
    } else if (isLocalDeclAhead()) {
      adopt(id, parseVarDecl(AstKind::LocalDecl, pos_));
    } else {
      adopt(id, parseExprOrAssign());
    }
    if (atSym(";")) {
      int e = make(AstKind::EmptyStmt, pos_);
      ++pos_;
      adopt(id, e);
    } else {
      adopt(id, parseExpression());
      expectSemicolon();
    }
    if (!atSym(")")) {
      while (true) {
        adopt(id, parseExpressionAllowIncrementAssign());
        if (atSym(",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expectSym(")");
    adopt(id, parseBody());
    finish(id, pos_ - 1);
    return id;
  }

  // Loop bodies and branches; a missing body is repaired as a block.
  int parseBody() {
    if (at(TokenKind::End)) {
      missingRule("block");
      return make(AstKind::BadStmt, pos_);
    }
    return parseStatement();
  }

  int parseTry() {
    int id = make(AstKind::TryStmt, pos_);
    ++pos_;
    adopt(id, parseBlock());
    bool handled = false;
    while (atKw("catch")) {
      handled = true;
      int c = make(AstKind::CatchClause, pos_);
      ++pos_;
      expectSym("(");
      if (auto ts = scanType(pos_)) {
        int typeTok = pos_;
        adopt(c, makeTypeRef(*ts, typeTok));
      } else {
        missingRule("type");
      }
      if (at(TokenKind::Identifier)) {
        nodes_[c].text = cur().text;
        ++pos_;
      }
      expectSym(")");
      adopt(c, parseBlock());
      finish(c, pos_ - 1);
      adopt(id, c);
    }
    if (atKw("finally")) {
      handled = true;
      int f = make(AstKind::FinallyClause, pos_);
      ++pos_;
      adopt(f, parseBlock());
      finish(f, pos_ - 1);
      adopt(id, f);
    }
    if (!handled) missingRule("catch-or-finally");
    finish(id, pos_ - 1);
    return id;
  }

  int parseReturn() {
    int id = make(AstKind::ReturnStmt, pos_);
    ++pos_;
    if (!atSym(";") && !atSym("}") && !at(TokenKind::End)) adopt(id, parseExpression());
    expectSemicolon();
    finish(id, pos_ - 1);
    return id;
  }

  int parseThrow() {
    int id = make(AstKind::ThrowStmt, pos_);
    ++pos_;
    adopt(id, parseExpression());
    expectSemicolon();
    finish(id, pos_ - 1);
    return id;
  }

  int parseExprOrAssign() {
    int start = pos_;
    int lhs = parseExpression();
    static const char *assignOps[] = {"=",  "+=", "-=", "*=", "/=",
                                      "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};
    for (const char *op : assignOps) {
      if (atSym(op)) {
        int id = make(AstKind::AssignStmt, start);
        nodes_[id].text = op;
        adopt(id, lhs);
        ++pos_;
        adopt(id, parseExpression());
        expectSemicolon();
        finish(id, pos_ - 1);
        return id;
      }
    }
    int id = make(AstKind::ExprStmt, start);
    adopt(id, lhs);
    expectSemicolon();
    finish(id, pos_ - 1);
    return id;
  }

  // Classic-for updates admit i++ but also i += 2 without a trailing ';'.
  int parseExpressionAllowIncrementAssign() {
    int start = pos_;
    int lhs = parseExpression();
    if (atSym("=") || atSym("+=") || atSym("-=")) {
      int id = make(AstKind::AssignStmt, start);
      nodes_[id].text = cur().text;
      adopt(id, lhs);
      ++pos_;
      adopt(id, parseExpression());
      finish(id, pos_ - 1);
      return id;
    }
    return lhs;
  }

  // --- expressions -----------------------------------------------------

  int parseExpression() { return parseBinary(0); }

  struct Level {
    std::vector<const char *> ops;
  };

  int parseBinary(int level) {
    static const std::vector<Level> levels = {
        {{"||"}},
        {{"&&"}},
        {{"|"}},
        {{"^"}},
        {{"&"}},
        {{"==", "!="}},
        {{"<", ">", "<=", ">="}},
        {{"<<", ">>", ">>>"}},
        {{"+", "-"}},
        {{"*", "/", "%"}},
    };
    if (level >= static_cast<int>(levels.size())) return parseUnary();

    int start = pos_;
    int lhs = parseBinary(level + 1);
    while (true) {
      if (level == 6 && atKw("instanceof")) {
        ++pos_;
        int id = make(AstKind::BinaryExpr, start);
        nodes_[id].text = "instanceof";
        adopt(id, lhs);
        if (auto ts = scanType(pos_)) {
          int typeTok = pos_;
          adopt(id, makeTypeRef(*ts, typeTok));
        } else {
          missingRule("type");
          adopt(id, make(AstKind::BadExpr, pos_));
        }
        finish(id, pos_ - 1);
        lhs = id;
        continue;
      }
      bool matched = false;
      for (const char *op : levels[level].ops) {
        if (atSym(op)) {
          ++pos_;
          int rhs = parseBinary(level + 1);
          int id = make(AstKind::BinaryExpr, start);
          nodes_[id].text = op;
          adopt(id, lhs);
          adopt(id, rhs);
          finish(id, pos_ - 1);
          lhs = id;
          matched = true;
          break;
        }
      }
      if (!matched) break;
    }
    return lhs;
  }

  int parseUnary() {
    static const char *prefixOps[] = {"!", "~", "-", "+", "++", "--"};
    for (const char *op : prefixOps) {
      if (atSym(op)) {
        int start = pos_;
        ++pos_;
        int operand = parseUnary();
        int id = make(AstKind::UnaryExpr, start);
        nodes_[id].text = op;
        adopt(id, operand);
        finish(id, pos_ - 1);
        return id;
      }
    }
    return parsePostfix();
  }

  int parsePostfix() {
    int start = pos_;
    int expr = parsePrimary();
    while (true) {
      if (atSym(".") && tok(pos_ + 1).kind == TokenKind::Identifier) {
        std::string name = tok(pos_ + 1).text;
        pos_ += 2;
        if (atSym("(")) {
          int id = make(AstKind::CallExpr, start);
          nodes_[id].text = name;
          nodes_[id].flag = true; // has receiver
          adopt(id, expr);
          parseArgs(id);
          finish(id, pos_ - 1);
          expr = id;
        } else {
          int id = make(AstKind::FieldAccess, start);
          nodes_[id].text = name;
          adopt(id, expr);
          finish(id, pos_ - 1);
          expr = id;
        }
        continue;
      }
      if (atSym("[")) {
        ++pos_;
        int idx = parseExpression();
        expectSym("]");
        int id = make(AstKind::IndexExpr, start);
        adopt(id, expr);
        adopt(id, idx);
        finish(id, pos_ - 1);
        expr = id;
        continue;
      }
      if (atSym("++") || atSym("--")) {
        int id = make(AstKind::UnaryExpr, start);
        nodes_[id].text = cur().text;
        nodes_[id].flag = true; // postfix
        adopt(id, expr);
        ++pos_;
        finish(id, pos_ - 1);
        expr = id;
        continue;
      }
      break;
    }
    return expr;
  }

  void parseArgs(int callId) {
    expectSym("(");
    while (!at(TokenKind::End) && !atSym(")")) {
      int before = pos_;
      adopt(callId, parseExpression());
      if (atSym(",")) {
        ++pos_;
        continue;
      }
      if (atSym(")")) break;
      if (atSym(";") || atSym("}") || atSym("{")) {
        missingSymbol(")");
        return;
      }
      if (pos_ == before) {
        extraHere();
        ++pos_;
      }
    }
    expectSym(")");
  }

  int parsePrimary() {
    const Token &t = cur();
    if (t.kind == TokenKind::Number || t.kind == TokenKind::String || t.kind == TokenKind::Char ||
        t.isKeyword("true") || t.isKeyword("false") || t.isKeyword("null")) {
      int id = make(AstKind::LiteralExpr, pos_);
      nodes_[id].text = t.text;
      ++pos_;
      return id;
    }
    if (t.isKeyword("this") || t.isKeyword("super")) {
      int id = make(AstKind::NameExpr, pos_);
      nodes_[id].text = t.text;
      ++pos_;
      return id;
    }
    if (t.isKeyword("new")) return parseCreation();
    if (t.isSymbol("(")) {
      // Cast when a full type sits between the parens and an operand follows.
      if (auto ts = scanType(pos_ + 1)) {
        if (tok(ts->end).isSymbol(")") && startsOperand(tok(ts->end + 1))) {
          int start = pos_;
          ++pos_;
          int typeTok = pos_;
          int typeRef = makeTypeRef(*ts, typeTok);
          ++pos_; // ')'
          int operand = parseUnary();
          int id = make(AstKind::CastExpr, start);
          nodes_[id].text = nodes_[typeRef].text;
          adopt(id, typeRef);
          adopt(id, operand);
          finish(id, pos_ - 1);
          return id;
        }
      }
      int start = pos_;
      ++pos_;
      int inner = parseExpression();
      expectSym(")");
      int id = make(AstKind::ParenExpr, start);
      adopt(id, inner);
      finish(id, pos_ - 1);
      return id;
    }
    if (t.kind == TokenKind::Identifier) {
      int id = make(AstKind::NameExpr, pos_);
      nodes_[id].text = t.text;
      ++pos_;
      if (atSym("(")) {
        int call = make(AstKind::CallExpr, nodes_[id].firstTok);
        nodes_[call].text = nodes_[id].text;
        nodes_[call].flag = false; // unqualified
        parseArgs(call);
        finish(call, pos_ - 1);
        return call;
      }
      return id;
    }
    if (t.kind == TokenKind::Invalid) {
      invalidHere("expression");
      int id = make(AstKind::BadExpr, pos_);
      ++pos_;
      return id;
    }
    // Nothing usable here: the expression itself is missing.
    missingRule("expression");
    return make(AstKind::BadExpr, pos_);
  }

  int parseCreation() {
    int start = pos_;
    ++pos_; // 'new'
    auto ts = scanType(pos_);
    if (!ts) {
      missingRule("type");
      int id = make(AstKind::BadExpr, start);
      finish(id, pos_ - 1);
      return id;
    }
    std::string typeText = ts->text;
    // Array form: the scanned [] pairs belong to the creation, and explicit
    // dimension expressions may follow.
    bool sawArraySuffix = typeText.size() >= 2 && typeText.substr(typeText.size() - 2) == "[]";
    int typeTok = pos_;
    int typeRef = makeTypeRef(*ts, typeTok);
    if (atSym("[") || sawArraySuffix) {
      int id = make(AstKind::NewArrayExpr, start);
      nodes_[id].text = typeText;
      adopt(id, typeRef);
      while (atSym("[")) {
        ++pos_;
        if (!atSym("]")) adopt(id, parseExpression());
        expectSym("]");
        nodes_[id].text += "[]";
      }
      if (atSym("{")) {
        nodes_[id].flag = true;
        ++pos_;
        while (!at(TokenKind::End) && !atSym("}")) {
          int before = pos_;
          adopt(id, parseExpression());
          if (atSym(",")) ++pos_;
          if (pos_ == before) {
            extraHere();
            ++pos_;
          }
        }
        expectSym("}");
      }
      finish(id, pos_ - 1);
      return id;
    }
    int id = make(AstKind::NewObjectExpr, start);
    nodes_[id].text = typeText;
    adopt(id, typeRef);
    if (atSym("(")) {
      parseArgs(id);
    } else {
      missingSymbol("(");
    }
    finish(id, pos_ - 1);
    return id;
  }
};

} // namespace

SyntaxTree parseUnit(SourcePtr src, ParseOptions opts) {
  Parser p(std::move(src), opts);
  return p.run();
}

} // namespace refix
