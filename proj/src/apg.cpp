#include "refix/apg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace refix {

const char *apgKindName(ApgKind k) {
  switch (k) {
  case ApgKind::Root: return "root";
  case ApgKind::MethodCall: return "methodCall";
  case ApgKind::ClassCast: return "classCast";
  case ApgKind::VarDecl: return "varDecl";
  case ApgKind::Assignment: return "assignment";
  case ApgKind::Loop: return "loop";
  case ApgKind::Condition: return "condition";
  case ApgKind::ArrayAccess: return "arrayAccess";
  case ApgKind::ObjectCreation: return "objectCreation";
  case ApgKind::ArrayCreation: return "arrayCreation";
  case ApgKind::TryCatch: return "tryCatch";
  case ApgKind::ThrowStmt: return "throwStmt";
  case ApgKind::ReturnStmt: return "returnStmt";
  case ApgKind::Literal: return "literal";
  case ApgKind::VarRef: return "varRef";
  case ApgKind::BinaryOp: return "binaryOp";
  }
  return "?";
}

const char *roleName(Role r) {
  switch (r) {
  case Role::CalleeName: return "calleeName";
  case Role::ReceiverName: return "receiverName";
  case Role::ReceiverType: return "receiverType";
  case Role::TargetType: return "targetType";
  case Role::DeclaredType: return "declaredType";
  case Role::VarName: return "varName";
  case Role::ArgCount: return "argCount";
  case Role::ArgSummary: return "argSummary";
  case Role::Operator: return "operator";
  case Role::LiteralKind: return "literalKind";
  }
  return "?";
}

bool isInferableRole(Role r) { return r == Role::ReceiverType || r == Role::DeclaredType; }

bool isTypeRole(Role r) {
  return r == Role::ReceiverType || r == Role::TargetType || r == Role::DeclaredType;
}

std::string eraseGenerics(const std::string &type) {
  std::string out;
  int depth = 0;
  for (char c : type) {
    if (c == '<') {
      ++depth;
      continue;
    }
    if (c == '>') {
      if (depth > 0) --depth;
      continue;
    }
    if (depth == 0) out.push_back(c);
  }
  return out;
}

std::string normalizeForCompare(Role role, const std::string &value) {
  if (!isTypeRole(role)) return value;
  std::string t = eraseGenerics(value);
  auto dot = t.rfind('.');
  if (dot != std::string::npos) t = t.substr(dot + 1);
  return t;
}

std::vector<int> Apg::preorder() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int id) {
    if (!nodes[id].alive) return;
    out.push_back(id);
    for (int c : nodes[id].children) walk(c);
  };
  walk(root);
  return out;
}

std::vector<int> Apg::liveNonRoot() const {
  auto all = preorder();
  all.erase(all.begin());
  return all;
}

int Apg::liveCount() const { return static_cast<int>(liveNonRoot().size()); }

namespace {

bool isStructuralExpr(const SyntaxTree &t, int id) {
  switch (t.node(id).kind) {
  case AstKind::CallExpr:
  case AstKind::CastExpr:
  case AstKind::NewObjectExpr:
  case AstKind::NewArrayExpr:
  case AstKind::IndexExpr:
    return true;
  case AstKind::ParenExpr:
    return isStructuralExpr(t, t.node(id).children[0]);
  case AstKind::BinaryExpr: {
    for (int c : t.node(id).children)
      if (isStructuralExpr(t, c)) return true;
    return false;
  }
  default:
    return false;
  }
}

int throughParens(const SyntaxTree &t, int id) {
  while (t.node(id).kind == AstKind::ParenExpr) id = t.node(id).children[0];
  return id;
}

class Builder {
public:
  explicit Builder(const SyntaxTree &tree) : t_(tree) {
    apg_.origin = tree.src;
    ApgNode root;
    root.kind = ApgKind::Root;
    root.statementLevel = true;
    apg_.nodes.push_back(root);
  }

  Apg buildAll() {
    collectDecls(t_.root);
    buildStatements(apg_.root, t_.root);
    finishSpans();
    return std::move(apg_);
  }

  Apg buildMethod(int methodId) {
    collectDecls(t_.root);
    const AstNode &m = t_.node(methodId);
    for (int c : m.children)
      if (t_.node(c).kind == AstKind::Block) buildStatements(apg_.root, c);
    finishSpans();
    return std::move(apg_);
  }

private:
  const SyntaxTree &t_;
  Apg apg_;
  std::vector<Span> extents_; // parallel to apg_.nodes

  // --- declarations ---------------------------------------------------

  void collectDecls(int id) {
    const AstNode &n = t_.node(id);
    switch (n.kind) {
    case AstKind::LocalDecl:
    case AstKind::FieldDecl:
    case AstKind::Param:
    case AstKind::ForEachStmt:
      if (!n.children.empty() && t_.node(n.children[0]).kind == AstKind::TypeRef &&
          !n.text.empty())
        apg_.declaredTypes.emplace(n.text, t_.node(n.children[0]).text);
      break;
    case AstKind::CatchClause:
      if (!n.children.empty() && t_.node(n.children[0]).kind == AstKind::TypeRef &&
          !n.text.empty())
        apg_.declaredTypes.emplace(n.text, t_.node(n.children[0]).text);
      break;
    default:
      break;
    }
    for (int c : n.children) collectDecls(c);
  }

  std::string inferredType(const std::string &name) const {
    auto it = apg_.declaredTypes.find(name);
    return it == apg_.declaredTypes.end() ? std::string() : eraseGenerics(it->second);
  }

  // --- node construction ------------------------------------------------

  int makeNode(ApgKind kind, int astId, int parent, bool stmtLevel) {
    ApgNode n;
    n.kind = kind;
    n.parent = parent;
    n.sourceLine = t_.nodeLine(astId);
    n.statementLevel = stmtLevel;
    apg_.nodes.push_back(std::move(n));
    extents_.resize(apg_.nodes.size());
    int id = static_cast<int>(apg_.nodes.size()) - 1;
    extents_[id] = t_.nodeSpan(astId);
    apg_.nodes[parent].children.push_back(id);
    return id;
  }

  void addComp(int id, Role role, std::string value, Span span = {}, bool inferred = false) {
    if (value.empty()) return;
    apg_.node(id).components.emplace_back(role, std::move(value), span, inferred);
  }

  void addInferredReceiverType(int id, const std::string &name) {
    std::string ty = inferredType(name);
    if (!ty.empty()) addComp(id, Role::ReceiverType, ty, {}, true);
  }

  // --- statements -------------------------------------------------------

  void buildStatements(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    switch (n.kind) {
    case AstKind::Unit:
    case AstKind::Block:
      for (int c : n.children) buildStatements(parent, c);
      break;
    case AstKind::ClassDecl:
      for (int c : n.children) buildStatements(parent, c);
      break;
    case AstKind::MethodDecl:
      for (int c : n.children)
        if (t_.node(c).kind == AstKind::Block) buildStatements(parent, c);
      break;
    case AstKind::LocalDecl:
    case AstKind::FieldDecl:
      buildDecl(parent, astId);
      break;
    case AstKind::AssignStmt:
      buildAssign(parent, astId);
      break;
    case AstKind::ExprStmt:
      buildExprStmt(parent, astId);
      break;
    case AstKind::IfStmt:
      buildIf(parent, astId);
      break;
    case AstKind::WhileStmt:
      buildWhile(parent, astId);
      break;
    case AstKind::ForStmt:
      buildFor(parent, astId);
      break;
    case AstKind::ForEachStmt:
      buildForEach(parent, astId);
      break;
    case AstKind::TryStmt:
      buildTry(parent, astId);
      break;
    case AstKind::ReturnStmt:
      buildReturnThrow(parent, astId, ApgKind::ReturnStmt);
      break;
    case AstKind::ThrowStmt:
      buildReturnThrow(parent, astId, ApgKind::ThrowStmt);
      break;
    default:
      break; // empty/bad/break/continue/annotations carry no APG weight
    }
  }

  void buildDecl(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    if (n.children.size() < 3) return; // bare declaration: symbol table only
    int typeRef = n.children[0];
    int nameExpr = n.children[1];
    int init = n.children[2];
    int id = makeNode(ApgKind::VarDecl, astId, parent, true);
    addComp(id, Role::DeclaredType, t_.node(typeRef).text, t_.nodeSpan(typeRef));
    addComp(id, Role::VarName, n.text, t_.nodeSpan(nameExpr));
    handleValue(id, init);
  }

  void buildAssign(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(ApgKind::Assignment, astId, parent, true);
    int lhs = throughParens(t_, n.children[0]);
    const AstNode &l = t_.node(lhs);
    if (l.kind == AstKind::NameExpr) {
      addComp(id, Role::VarName, l.text, t_.nodeSpan(lhs));
      std::string ty = inferredType(l.text);
      if (!ty.empty()) addComp(id, Role::DeclaredType, ty, {}, true);
    } else if (l.kind == AstKind::IndexExpr) {
      addComp(id, Role::VarName, t_.nodeText(t_.node(lhs).children[0]), t_.nodeSpan(lhs));
      buildArrayAccess(id, lhs);
    } else {
      addComp(id, Role::VarName, t_.nodeText(lhs), t_.nodeSpan(lhs));
    }
    if (n.text != "=") addComp(id, Role::Operator, n.text);
    if (n.children.size() > 1) handleValue(id, n.children[1]);
  }

  void buildExprStmt(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    if (n.children.empty()) return;
    int e = throughParens(t_, n.children[0]);
    const AstNode &en = t_.node(e);
    if (en.kind == AstKind::CallExpr) {
      buildCall(parent, e, true, astId);
    } else if (en.kind == AstKind::UnaryExpr && (en.text == "++" || en.text == "--")) {
      int id = makeNode(ApgKind::Assignment, astId, parent, true);
      addComp(id, Role::VarName, t_.nodeText(en.children[0]), t_.nodeSpan(en.children[0]));
      addComp(id, Role::Operator, en.text);
    } else if (isStructuralExpr(t_, e)) {
      handleValueAsChild(parent, e, astId);
    }
  }

  void buildIf(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(ApgKind::Condition, astId, parent, true);
    if (!n.children.empty())
      addComp(id, Role::ArgSummary, t_.nodeText(n.children[0]), t_.nodeSpan(n.children[0]));
    for (size_t i = 1; i < n.children.size(); ++i) buildStatements(id, n.children[i]);
  }

  void buildWhile(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(ApgKind::Loop, astId, parent, true);
    if (!n.children.empty())
      addComp(id, Role::ArgSummary, t_.nodeText(n.children[0]), t_.nodeSpan(n.children[0]));
    for (size_t i = 1; i < n.children.size(); ++i) buildStatements(id, n.children[i]);
  }

  void buildFor(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(ApgKind::Loop, astId, parent, true);
    // children: init, cond, update*, body — only the condition is a component.
    if (n.children.size() >= 2) {
      int cond = n.children[1];
      if (t_.node(cond).kind != AstKind::EmptyStmt)
        addComp(id, Role::ArgSummary, t_.nodeText(cond), t_.nodeSpan(cond));
    }
    if (!n.children.empty()) buildStatements(id, n.children.back());
  }

  void buildForEach(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(ApgKind::Loop, astId, parent, true);
    int typeRef = n.children[0];
    int nameExpr = n.children[1];
    addComp(id, Role::VarName, n.text, t_.nodeSpan(nameExpr));
    addComp(id, Role::DeclaredType, t_.node(typeRef).text, t_.nodeSpan(typeRef));
    if (n.children.size() > 2) {
      int iter = throughParens(t_, n.children[2]);
      apg_.node(id).iterSlotSpan = t_.nodeSpan(n.children[2]);
      if (isStructuralExpr(t_, iter)) {
        handleValueAsChild(id, iter, iter);
        apg_.node(id).iterChildren = 1;
      } else {
        addComp(id, Role::ReceiverName, t_.nodeText(iter), t_.nodeSpan(iter));
        if (t_.node(iter).kind == AstKind::NameExpr)
          addInferredReceiverType(id, t_.node(iter).text);
      }
    }
    if (n.children.size() > 3) buildStatements(id, n.children.back());
  }

  void buildTry(int parent, int astId) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(ApgKind::TryCatch, astId, parent, true);
    for (int c : n.children) {
      const AstNode &cn = t_.node(c);
      if (cn.kind == AstKind::Block) {
        buildStatements(id, c);
      } else if (cn.kind == AstKind::CatchClause) {
        if (!cn.children.empty() && t_.node(cn.children[0]).kind == AstKind::TypeRef)
          addComp(id, Role::TargetType, t_.node(cn.children[0]).text,
                  t_.nodeSpan(cn.children[0]));
        if (!cn.text.empty()) addComp(id, Role::VarName, cn.text);
        for (int cc : cn.children)
          if (t_.node(cc).kind == AstKind::Block) buildStatements(id, cc);
      } else if (cn.kind == AstKind::FinallyClause) {
        for (int cc : cn.children) buildStatements(id, cc);
      }
    }
  }

  void buildReturnThrow(int parent, int astId, ApgKind kind) {
    const AstNode &n = t_.node(astId);
    int id = makeNode(kind, astId, parent, true);
    if (!n.children.empty()) handleValue(id, n.children[0]);
  }

  // --- value positions -------------------------------------------------

  // An initializer, rhs, argument, or operand: structural expressions become
  // child nodes, everything else a summary component on the parent.
  void handleValue(int parentApg, int exprId) {
    int e = throughParens(t_, exprId);
    if (isStructuralExpr(t_, e)) {
      handleValueAsChild(parentApg, e, e);
      apg_.node(parentApg).argOrder.push_back(
          {true, static_cast<int>(apg_.node(parentApg).children.size()) - 1});
      return;
    }
    addComp(parentApg, Role::ArgSummary, t_.nodeText(exprId), t_.nodeSpan(exprId));
    int compIdx = static_cast<int>(apg_.node(parentApg).components.size()) - 1;
    apg_.node(parentApg).argOrder.push_back({false, compIdx});
  }

  void handleValueAsChild(int parentApg, int exprId, int extentAstId) {
    const AstNode &n = t_.node(exprId);
    switch (n.kind) {
    case AstKind::CallExpr:
      buildCall(parentApg, exprId, false, extentAstId);
      break;
    case AstKind::CastExpr:
      buildCast(parentApg, exprId, extentAstId);
      break;
    case AstKind::NewObjectExpr:
      buildCreation(parentApg, exprId, extentAstId);
      break;
    case AstKind::NewArrayExpr:
      buildArrayCreation(parentApg, exprId, extentAstId);
      break;
    case AstKind::IndexExpr:
      buildArrayAccess(parentApg, exprId);
      break;
    case AstKind::BinaryExpr:
      buildBinary(parentApg, exprId, extentAstId);
      break;
    default:
      addComp(parentApg, Role::ArgSummary, t_.nodeText(exprId), t_.nodeSpan(exprId));
      break;
    }
  }

  void buildCall(int parentApg, int callId, bool stmtLevel, int extentAstId) {
    const AstNode &n = t_.node(callId);
    int id = makeNode(ApgKind::MethodCall, extentAstId, parentApg, stmtLevel);
    extents_[id] = t_.nodeSpan(extentAstId);

    size_t firstArg = 0;
    addComp(id, Role::CalleeName, n.text, calleeSpan(callId));
    if (n.flag) {
      firstArg = 1;
      int recv = throughParens(t_, n.children[0]);
      const AstNode &r = t_.node(recv);
      if (isStructuralExpr(t_, recv)) {
        apg_.node(id).receiverChild = true;
        handleValueAsChild(id, recv, n.children[0]);
      } else {
        addComp(id, Role::ReceiverName, t_.nodeText(n.children[0]), t_.nodeSpan(n.children[0]));
        if (r.kind == AstKind::NameExpr) addInferredReceiverType(id, r.text);
      }
    }
    int argCount = static_cast<int>(n.children.size() - firstArg);
    addComp(id, Role::ArgCount, std::to_string(argCount), argListSpan(callId));
    apg_.node(id).argListSpan = argListSpan(callId);
    for (size_t i = firstArg; i < n.children.size(); ++i) handleValue(id, n.children[i]);
  }

  void buildCast(int parentApg, int castId, int extentAstId) {
    const AstNode &n = t_.node(castId);
    int id = makeNode(ApgKind::ClassCast, extentAstId, parentApg, false);
    addComp(id, Role::TargetType, t_.node(n.children[0]).text, t_.nodeSpan(n.children[0]));
    if (n.children.size() > 1) handleValue(id, n.children[1]);
  }

  void buildCreation(int parentApg, int newId, int extentAstId) {
    const AstNode &n = t_.node(newId);
    int id = makeNode(ApgKind::ObjectCreation, extentAstId, parentApg, false);
    addComp(id, Role::TargetType, n.text, t_.nodeSpan(n.children[0]));
    int argCount = static_cast<int>(n.children.size()) - 1;
    addComp(id, Role::ArgCount, std::to_string(argCount), argListSpan(newId));
    apg_.node(id).argListSpan = argListSpan(newId);
    for (size_t i = 1; i < n.children.size(); ++i) handleValue(id, n.children[i]);
  }

  void buildArrayCreation(int parentApg, int newId, int extentAstId) {
    const AstNode &n = t_.node(newId);
    int id = makeNode(ApgKind::ArrayCreation, extentAstId, parentApg, false);
    std::string base = n.text;
    while (base.size() >= 2 && base.substr(base.size() - 2) == "[]")
      base.resize(base.size() - 2);
    addComp(id, Role::TargetType, base, t_.nodeSpan(n.children[0]));
    apg_.node(id).argListSpan = bracketSpan(newId);
    for (size_t i = 1; i < n.children.size(); ++i) handleValue(id, n.children[i]);
  }

  void buildArrayAccess(int parentApg, int idxId) {
    const AstNode &n = t_.node(idxId);
    int id = makeNode(ApgKind::ArrayAccess, idxId, parentApg, false);
    int base = throughParens(t_, n.children[0]);
    if (isStructuralExpr(t_, base)) {
      apg_.node(id).receiverChild = true;
      handleValueAsChild(id, base, n.children[0]);
    } else {
      addComp(id, Role::ReceiverName, t_.nodeText(n.children[0]), t_.nodeSpan(n.children[0]));
      if (t_.node(base).kind == AstKind::NameExpr)
        addInferredReceiverType(id, t_.node(base).text);
    }
    if (n.children.size() > 1) handleValue(id, n.children[1]);
  }

  void buildBinary(int parentApg, int binId, int extentAstId) {
    const AstNode &n = t_.node(binId);
    int id = makeNode(ApgKind::BinaryOp, extentAstId, parentApg, false);
    addComp(id, Role::Operator, n.text);
    for (int c : n.children) handleValue(id, c);
  }

  // --- span helpers -----------------------------------------------------

  Span calleeSpan(int callId) const {
    // The identifier token immediately before the argument '('.
    const AstNode &n = t_.node(callId);
    for (int i = n.lastTok; i >= n.firstTok; --i) {
      if (t_.tokens[i].isSymbol("(")) {
        const Token &name = t_.tokens[i - 1];
        if (name.kind == TokenKind::Identifier)
          return {name.offset, name.offset + name.length};
      }
    }
    return {};
  }

  Span argListSpan(int callId) const {
    const AstNode &n = t_.node(callId);
    // Interior of the outermost trailing paren pair.
    int close = n.lastTok;
    while (close >= n.firstTok && !t_.tokens[close].isSymbol(")")) --close;
    if (close < n.firstTok) return {};
    int depth = 0;
    for (int i = close; i >= n.firstTok; --i) {
      if (t_.tokens[i].isSymbol(")")) ++depth;
      if (t_.tokens[i].isSymbol("(")) {
        --depth;
        if (depth == 0)
          return {t_.tokens[i].offset + 1, t_.tokens[close].offset};
      }
    }
    return {};
  }

  Span bracketSpan(int newId) const {
    const AstNode &n = t_.node(newId);
    int open = -1, close = -1;
    for (int i = n.firstTok; i <= n.lastTok; ++i) {
      if (t_.tokens[i].isSymbol("[") && open < 0) open = i;
      if (t_.tokens[i].isSymbol("]")) close = i;
    }
    if (open < 0 || close < 0) return {};
    return {t_.tokens[open].offset + 1, t_.tokens[close].offset};
  }

  // --- owned spans --------------------------------------------------------

  void finishSpans() {
    for (size_t i = 0; i < apg_.nodes.size(); ++i) {
      ApgNode &n = apg_.nodes[i];
      if (n.kind == ApgKind::Root) continue;
      n.stmtSpan = extents_[i];
      std::vector<Span> holes;
      for (int c : n.children) holes.push_back(extents_[c]);
      std::sort(holes.begin(), holes.end(),
                [](const Span &a, const Span &b) { return a.begin < b.begin; });
      int cursor = n.stmtSpan.begin;
      for (const Span &h : holes) {
        if (!h.valid()) continue;
        if (h.begin > cursor) n.ownedSpans.push_back({cursor, h.begin});
        cursor = std::max(cursor, h.end);
      }
      if (cursor < n.stmtSpan.end) n.ownedSpans.push_back({cursor, n.stmtSpan.end});
    }
  }
};

} // namespace

Apg buildApg(const SyntaxTree &tree) { return Builder(tree).buildAll(); }

Apg buildApgFromMethod(const SyntaxTree &tree, int methodNodeId) {
  return Builder(tree).buildMethod(methodNodeId);
}

Apg pruneApg(const Apg &apg, const std::set<int> &lines) {
  std::vector<char> keep(apg.nodes.size(), 0);
  std::function<bool(int)> mark = [&](int id) -> bool {
    bool any = apg.nodes[id].kind == ApgKind::Root ||
               lines.count(apg.nodes[id].sourceLine) > 0;
    bool childKept = false;
    for (int c : apg.nodes[id].children)
      if (apg.nodes[c].alive) childKept |= mark(c);
    keep[id] = any || childKept;
    return keep[id] != 0;
  };
  mark(apg.root);

  Apg out;
  out.origin = apg.origin;
  out.declaredTypes = apg.declaredTypes;
  out.nodes.clear();
  std::vector<int> remap(apg.nodes.size(), -1);
  std::function<int(int, int)> copy = [&](int id, int newParent) -> int {
    ApgNode n = apg.nodes[id];
    n.children.clear();
    n.parent = newParent;
    out.nodes.push_back(std::move(n));
    int nid = static_cast<int>(out.nodes.size()) - 1;
    remap[id] = nid;
    int iterKept = 0;
    const ApgNode &src = apg.nodes[id];
    for (size_t i = 0; i < src.children.size(); ++i) {
      int c = src.children[i];
      if (!apg.nodes[c].alive || !keep[c]) continue;
      int cid = copy(c, nid);
      out.nodes[nid].children.push_back(cid);
      if (static_cast<int>(i) < src.iterChildren) ++iterKept;
    }
    out.nodes[nid].iterChildren = iterKept;
    // argOrder entries referencing dropped children are rebuilt.
    out.nodes[nid].argOrder.clear();
    int childSeq = 0;
    for (const ArgRef &ar : src.argOrder) {
      if (!ar.isChild) {
        out.nodes[nid].argOrder.push_back(ar);
        continue;
      }
      if (ar.index < static_cast<int>(src.children.size()) &&
          keep[src.children[ar.index]] && apg.nodes[src.children[ar.index]].alive) {
        // position within the kept children list
        int pos = 0;
        for (int j = 0; j < ar.index; ++j)
          if (keep[src.children[j]] && apg.nodes[src.children[j]].alive) ++pos;
        out.nodes[nid].argOrder.push_back({true, pos});
      }
      ++childSeq;
    }
    (void)childSeq;
    return nid;
  };
  copy(apg.root, -1);
  out.root = 0;
  return out;
}

bool isValidApg(const Apg &apg, std::string *why) {
  auto fail = [&](const std::string &msg) {
    if (why) *why = msg;
    return false;
  };
  if (apg.nodes.empty() || apg.nodes[apg.root].kind != ApgKind::Root)
    return fail("missing synthetic root");
  std::vector<int> seen(apg.nodes.size(), 0);
  std::function<bool(int)> walk = [&](int id) -> bool {
    if (id < 0 || id >= static_cast<int>(apg.nodes.size())) return false;
    if (seen[id]++) return false; // cycle or shared node
    for (int c : apg.nodes[id].children) {
      if (!apg.nodes[c].alive) continue;
      if (apg.nodes[c].parent != id) return false;
      if (!walk(c)) return false;
    }
    return true;
  };
  if (!walk(apg.root)) return fail("not a tree (cycle, bad parent link, or dangling child)");
  for (int id : apg.liveNonRoot()) {
    const ApgNode &n = apg.nodes[id];
    for (const auto &c : n.components)
      if (c.value.empty()) return fail("empty component value");
    auto need = [&](Role r) { return n.find(r) != nullptr; };
    switch (n.kind) {
    case ApgKind::MethodCall:
      if (!need(Role::CalleeName)) return fail("methodCall without calleeName");
      break;
    case ApgKind::ClassCast:
    case ApgKind::ObjectCreation:
    case ApgKind::ArrayCreation:
      if (!need(Role::TargetType)) return fail("cast/creation without targetType");
      break;
    case ApgKind::VarDecl:
      if (!need(Role::VarName)) return fail("varDecl without varName");
      break;
    case ApgKind::Assignment:
      if (!need(Role::VarName)) return fail("assignment without varName");
      break;
    default:
      break;
    }
  }
  return true;
}

std::string outline(const Apg &apg) {
  std::ostringstream os;
  std::function<void(int, int)> walk = [&](int id, int depth) {
    if (!apg.nodes[id].alive) return;
    const ApgNode &n = apg.nodes[id];
    os << std::string(depth * 2, ' ') << apgKindName(n.kind);
    if (n.kind != ApgKind::Root) {
      os << " line=" << n.sourceLine << " [";
      bool first = true;
      for (const auto &c : n.components) {
        if (!first) os << ", ";
        first = false;
        os << roleName(c.role) << "=" << c.value;
        if (c.inferred) os << "*";
      }
      os << "]";
    }
    os << "\n";
    for (int c : n.children) walk(c, depth + 1);
  };
  walk(apg.root, 0);
  return os.str();
}

} // namespace refix
