#include "refix/edit_script.hpp"

#include "refix/lexer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace refix {

const char *editOpName(EditOpType t) {
  switch (t) {
  case EditOpType::Add: return "add";
  case EditOpType::Delete: return "delete";
  case EditOpType::Update: return "update";
  case EditOpType::Replace: return "replace";
  }
  return "?";
}

namespace {

std::vector<std::pair<Role, std::string>> diffKey(const ApgNode &n) {
  // Hard components minus argCount: argument counts follow from structure,
  // so a count change alone never warrants an update op.
  std::vector<std::pair<Role, std::string>> out;
  for (const auto &c : n.components)
    if (!c.inferred && c.role != Role::ArgCount)
      out.emplace_back(c.role, c.value);
  return out;
}

PayloadNode shallowPayload(const Apg &y, int id) {
  const ApgNode &n = y.node(id);
  PayloadNode p;
  p.kind = n.kind;
  for (const auto &c : n.components)
    if (!c.inferred) p.components.emplace_back(c.role, c.value);
  p.receiverChild = n.receiverChild;
  p.iterChildren = n.iterChildren;
  p.displayLine = n.sourceLine;
  return p;
}

PayloadNode deepPayload(const Apg &y, int id) {
  PayloadNode p = shallowPayload(y, id);
  for (int c : y.node(id).children)
    if (y.node(c).alive) p.children.push_back(deepPayload(y, c));
  return p;
}

void markSubtree(const Apg &t, int id, std::set<int> &out) {
  out.insert(id);
  for (int c : t.node(id).children)
    if (t.node(c).alive) markSubtree(t, c, out);
}

void postorderCollect(const Apg &t, int id, std::vector<int> &out) {
  for (int c : t.node(id).children)
    if (t.node(c).alive) postorderCollect(t, c, out);
  if (id != t.root) out.push_back(id);
}

bool isAncestorIn(const Apg &t, int anc, int node) {
  for (int p = t.node(node).parent; p >= 0; p = t.node(p).parent)
    if (p == anc) return true;
  return false;
}

// Child of `parent` whose subtree contains `node`; -1 if node is elsewhere.
int topChildUnder(const Apg &t, int parent, int node) {
  int cur = node;
  while (cur >= 0) {
    int p = t.node(cur).parent;
    if (p == parent) return cur;
    cur = p;
  }
  return -1;
}

int childIndexOf(const Apg &t, int parent, int child) {
  const auto &kids = t.node(parent).children;
  for (size_t i = 0; i < kids.size(); ++i)
    if (kids[i] == child) return static_cast<int>(i);
  return -1;
}

std::string originName(const Apg &a) {
  return a.origin ? a.origin->name() : "apg";
}

} // namespace

TriangulationResult triangulate(const Apg &qApg, const Apg &aApg, const Apg &pApg,
                                const AbstractDefs *defs) {
  TriangulationResult out;
  Alignment pq = alignApgs(pApg, qApg, defs);
  std::set<int> quesNodes;
  for (auto &pr : pq.matchedNodes) {
    if (pr.first == pApg.root) continue;
    quesNodes.insert(pr.second);
    out.quesRelevantLines.insert(qApg.node(pr.second).sourceLine);
  }
  // Nodes the pruned question would keep: matches plus their ancestors.
  std::set<int> qKeep = quesNodes;
  for (int id : quesNodes)
    for (int p = qApg.node(id).parent; p >= 0; p = qApg.node(p).parent)
      qKeep.insert(p);

  Alignment qa = alignApgs(qApg, aApg, defs);
  std::set<int> mappedA;
  for (auto &pr : qa.matchedNodes) {
    if (pr.first == qApg.root) continue;
    mappedA.insert(pr.second);
    if (qKeep.count(pr.first))
      out.ansRelevantLines.insert(aApg.node(pr.second).sourceLine);
  }
  // Answer statements with no question counterpart are the fix itself.
  for (int id : aApg.liveNonRoot())
    if (!mappedA.count(id))
      out.ansRelevantLines.insert(aApg.node(id).sourceLine);
  return out;
}

namespace {

struct Work {
  AnchorRef ref;
  int aNode = -1; // node of y this work entry stands for
  int xLine = 0;
  std::vector<int> kids;
};

} // namespace

EditScript deriveEditScript(const Apg &x, const Apg &y) {
  EditScript s;
  s.sourceApgId = originName(x);
  s.targetApgId = originName(y);

  Alignment al = alignApgs(x, y);
  std::map<int, int> xToY, yToX;
  for (auto &pr : al.matchedNodes) {
    xToY[pr.first] = pr.second;
    yToX[pr.second] = pr.first;
  }

  // Kind-incompatible pairs become whole-subtree replaces.
  std::set<int> consumedX, consumedY;
  std::vector<std::pair<int, int>> replacePairs;
  for (int xid : x.liveNonRoot()) {
    if (consumedX.count(xid)) continue;
    auto it = xToY.find(xid);
    if (it == xToY.end()) continue;
    if (!kindsCompatible(x.node(xid).kind, y.node(it->second).kind)) {
      replacePairs.emplace_back(xid, it->second);
      markSubtree(x, xid, consumedX);
      markSubtree(y, it->second, consumedY);
    }
  }

  std::map<int, int> replaceOpOfY; // y replace root -> op index
  for (auto &pr : replacePairs) {
    EditOperation op;
    op.type = EditOpType::Replace;
    op.anchor = {false, pr.first};
    op.anchorLine = x.node(pr.first).sourceLine;
    op.payload = deepPayload(y, pr.second);
    replaceOpOfY[pr.second] = static_cast<int>(s.ops.size());
    s.ops.push_back(std::move(op));
  }

  std::vector<int> post;
  postorderCollect(x, x.root, post);
  std::set<int> deleted;
  for (int xid : post) {
    if (consumedX.count(xid) || xToY.count(xid)) continue;
    EditOperation op;
    op.type = EditOpType::Delete;
    op.anchor = {false, xid};
    op.anchorLine = x.node(xid).sourceLine;
    deleted.insert(xid);
    s.ops.push_back(std::move(op));
  }

  for (int xid : x.liveNonRoot()) {
    if (consumedX.count(xid)) continue;
    auto it = xToY.find(xid);
    if (it == xToY.end()) continue;
    const ApgNode &nx = x.node(xid);
    const ApgNode &ny = y.node(it->second);
    if (nx.kind == ny.kind && diffKey(nx) == diffKey(ny)) continue;
    EditOperation op;
    op.type = EditOpType::Update;
    op.anchor = {false, xid};
    op.anchorLine = nx.sourceLine;
    op.payload = shallowPayload(y, it->second);
    s.ops.push_back(std::move(op));
  }

  // Insert simulation: x after replaces and deletes, every surviving entry
  // tagged with its y counterpart, so each unmapped y node lands at a
  // position expressed in current-children terms.
  std::vector<Work> w;
  std::map<int, int> wOfX, corr; // corr: y node -> work entry
  std::vector<int> pre = x.preorder();
  for (int xid : pre) {
    Work e;
    e.ref = {false, xid};
    e.xLine = x.node(xid).sourceLine;
    auto it = xToY.find(xid);
    if (it != xToY.end()) e.aNode = it->second;
    wOfX[xid] = static_cast<int>(w.size());
    w.push_back(e);
  }
  for (int xid : pre)
    for (int c : x.node(xid).children)
      if (x.node(c).alive) w[wOfX[xid]].kids.push_back(wOfX[c]);

  for (auto &pr : replacePairs) {
    Work e;
    e.ref = {true, replaceOpOfY[pr.second]};
    e.aNode = pr.second;
    int widx = static_cast<int>(w.size());
    w.push_back(e);
    int parent = x.node(pr.first).parent;
    auto &kids = w[wOfX[parent]].kids;
    std::replace(kids.begin(), kids.end(), wOfX[pr.first], widx);
    corr[pr.second] = widx;
  }
  // Deletes splice children into the parent slot, innermost first.
  for (int xid : post) {
    if (!deleted.count(xid)) continue;
    int parent = x.node(xid).parent;
    auto &kids = w[wOfX[parent]].kids;
    auto at = std::find(kids.begin(), kids.end(), wOfX[xid]);
    std::vector<int> grand = w[wOfX[xid]].kids;
    at = kids.erase(at);
    kids.insert(at, grand.begin(), grand.end());
  }
  for (auto &pr : al.matchedNodes)
    if (!consumedX.count(pr.first) && !deleted.count(pr.first))
      corr[pr.second] = wOfX[pr.first];

  for (int v : y.preorder()) {
    if (v == y.root || yToX.count(v) || consumedY.count(v)) continue;
    int pa = y.node(v).parent;
    auto cit = corr.find(pa);
    if (cit == corr.end()) continue;
    int wp = cit->second;
    int j = childIndexOf(y, pa, v);

    auto &kids = w[wp].kids;
    int firstCaptured = -1, captured = 0;
    int insertIndex = 0;
    for (size_t i = 0; i < kids.size(); ++i) {
      int ka = w[kids[i]].aNode;
      if (ka >= 0 && isAncestorIn(y, v, ka)) {
        if (firstCaptured < 0) firstCaptured = static_cast<int>(i);
        ++captured;
        continue;
      }
      if (firstCaptured >= 0) break;
      int top = ka >= 0 ? topChildUnder(y, pa, ka) : -1;
      int topIdx = top >= 0 ? childIndexOf(y, pa, top) : -1;
      if (topIdx >= 0 && topIdx < j) insertIndex = static_cast<int>(i) + 1;
    }
    if (firstCaptured >= 0) insertIndex = firstCaptured;

    EditOperation op;
    op.type = EditOpType::Add;
    op.payload = shallowPayload(y, v);
    EditPos pos;
    pos.index = insertIndex;
    pos.captured = captured;
    pos.iterSlot = y.node(pa).kind == ApgKind::Loop && j < y.node(pa).iterChildren;
    if (captured == 1) {
      pos.asParent = true;
      op.anchor = w[kids[firstCaptured]].ref;
      op.anchorLine = w[kids[firstCaptured]].xLine;
    } else {
      op.anchor = w[wp].ref;
      op.anchorLine = w[wp].xLine;
    }
    op.pos = pos;

    Work e;
    e.ref = {true, static_cast<int>(s.ops.size())};
    e.aNode = v;
    int widx = static_cast<int>(w.size());
    if (captured > 0) {
      e.kids.assign(kids.begin() + firstCaptured, kids.begin() + firstCaptured + captured);
      kids.erase(kids.begin() + firstCaptured, kids.begin() + firstCaptured + captured);
    }
    w.push_back(std::move(e));
    // Re-fetch: the push may have grown w and moved the kid lists.
    w[wp].kids.insert(w[wp].kids.begin() + insertIndex, widx);
    corr[v] = widx;
    s.ops.push_back(std::move(op));
  }
  return s;
}

namespace {

// Splice `value`, substituting every identifier token found in `tokenMap`.
std::string rewriteTokens(const std::string &value,
                          const std::map<std::string, std::string> &tokenMap) {
  if (tokenMap.empty() || value.empty()) return value;
  SourceText src(value);
  std::string out;
  int cursor = 0;
  for (const Token &t : tokenize(src)) {
    if (t.kind == TokenKind::End) break;
    auto it = tokenMap.find(t.text);
    if (it == tokenMap.end()) continue;
    out += value.substr(cursor, t.offset - cursor);
    out += it->second;
    cursor = t.offset + t.length;
  }
  out += value.substr(cursor);
  return out;
}

struct Namespace {
  std::set<std::string> tokens;

  bool contains(const std::string &t) const { return tokens.count(t) > 0; }

  void addValueTokens(const std::string &v) {
    SourceText src(v);
    for (const Token &t : tokenize(src))
      if (t.kind == TokenKind::Identifier) tokens.insert(t.text);
  }
};

Namespace namespaceOf(const Apg &y, const AbstractDefs *defs) {
  Namespace ns;
  for (int id : y.liveNonRoot())
    for (const auto &c : y.node(id).components) ns.addValueTokens(c.value);
  for (const auto &d : y.declaredTypes) {
    ns.tokens.insert(d.first);
    ns.addValueTokens(d.second);
  }
  if (defs)
    for (const auto &e : *defs)
      for (const auto &v : e.second) ns.addValueTokens(v);
  return ns;
}

bool payloadInNamespace(const PayloadNode &p, const Namespace &ns) {
  for (const auto &c : p.components) {
    if (c.role == Role::CalleeName || c.role == Role::Operator ||
        c.role == Role::LiteralKind || c.role == Role::ArgCount)
      continue;
    SourceText src(c.value);
    std::vector<Token> toks = tokenize(src);
    for (size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].kind != TokenKind::Identifier) continue;
      // A name directly applied to arguments is a method name, which lives
      // in the callee's type, not the snippet's namespace.
      if (i + 1 < toks.size() && toks[i + 1].isSymbol("(")) continue;
      if (!ns.contains(toks[i].text)) return false;
    }
  }
  for (const auto &c : p.children)
    if (!payloadInNamespace(c, ns)) return false;
  return true;
}

void rewritePayload(PayloadNode &p, const std::map<std::string, std::string> &tokenMap,
                    const std::map<int, int> &lineMap) {
  for (auto &c : p.components) c.value = rewriteTokens(c.value, tokenMap);
  auto it = lineMap.find(p.displayLine);
  if (it != lineMap.end()) p.displayLine = it->second;
  for (auto &c : p.children) rewritePayload(c, tokenMap, lineMap);
}

} // namespace

EditScript adaptEditScript(const EditScript &t, const Apg &x, const Apg &y,
                           const AbstractDefs *defs) {
  EditScript out;
  out.sourceApgId = originName(y);
  out.targetApgId = t.targetApgId;

  Alignment al = alignApgs(x, y, defs);
  std::map<int, int> xToY;
  for (auto &pr : al.matchedNodes) xToY[pr.first] = pr.second;

  Namespace ns = namespaceOf(y, defs);
  std::vector<int> remap(t.ops.size(), -1);

  for (size_t i = 0; i < t.ops.size(); ++i) {
    const EditOperation &op = t.ops[i];
    EditOperation adapted = op;

    if (op.anchor.isNew) {
      int creator = op.anchor.value;
      if (creator < 0 || creator >= static_cast<int>(remap.size()) || remap[creator] < 0)
        continue;
      adapted.anchor = {true, remap[creator]};
      adapted.anchorLine = out.ops[remap[creator]].payload
                               ? out.ops[remap[creator]].payload->displayLine
                               : 0;
    } else {
      auto it = xToY.find(op.anchor.value);
      if (it == xToY.end()) continue;
      adapted.anchor = {false, it->second};
      adapted.anchorLine = y.node(it->second).sourceLine;
      if (op.type == EditOpType::Update &&
          !kindsCompatible(op.payload->kind, y.node(it->second).kind))
        continue;
    }

    if (adapted.payload) {
      rewritePayload(*adapted.payload, al.tokenMap, al.lineMap);
      if (!payloadInNamespace(*adapted.payload, ns)) continue;
    }
    remap[i] = static_cast<int>(out.ops.size());
    out.ops.push_back(std::move(adapted));
  }
  return out;
}

namespace {

void rebuildArgOrder(ApgNode &n) {
  n.argOrder.clear();
  for (size_t i = 0; i < n.components.size(); ++i)
    if (n.components[i].role == Role::ArgSummary)
      n.argOrder.push_back({false, static_cast<int>(i)});
  for (size_t i = n.receiverChild ? 1 : 0; i < n.children.size(); ++i)
    n.argOrder.push_back({true, static_cast<int>(i)});
}

int buildFromPayload(Apg &apg, const PayloadNode &p, bool statementLevel) {
  ApgNode n;
  n.kind = p.kind;
  for (const auto &c : p.components)
    n.components.emplace_back(c.role, c.value, Span{}, false);
  n.receiverChild = p.receiverChild;
  n.iterChildren = p.iterChildren;
  n.sourceLine = p.displayLine;
  n.synthetic = true;
  n.statementLevel = statementLevel;
  int id = static_cast<int>(apg.nodes.size());
  apg.nodes.push_back(std::move(n));
  for (const auto &c : p.children) {
    int cid = buildFromPayload(apg, c, false);
    apg.nodes[id].children.push_back(cid);
    apg.nodes[cid].parent = id;
  }
  // Summaries first, then structural children: the only ordering a payload
  // can still express.
  auto &node = apg.nodes[id];
  node.argOrder.clear();
  for (size_t i = 0; i < node.components.size(); ++i)
    if (node.components[i].role == Role::ArgSummary)
      node.argOrder.push_back({false, static_cast<int>(i)});
  for (size_t i = node.receiverChild ? 1 : 0; i < node.children.size(); ++i)
    node.argOrder.push_back({true, static_cast<int>(i)});
  return id;
}

void killSubtree(Apg &apg, int id) {
  apg.node(id).alive = false;
  for (int c : apg.node(id).children) killSubtree(apg, c);
  apg.node(id).children.clear();
}

bool isContainerKind(ApgKind k) {
  return k == ApgKind::Root || k == ApgKind::Loop || k == ApgKind::Condition ||
         k == ApgKind::TryCatch;
}

} // namespace

Apg applyScript(const Apg &apg, const EditScript &s) {
  Apg out = apg;
  std::vector<int> created(s.ops.size(), -1);

  auto resolve = [&](const AnchorRef &r, int opIdx) -> int {
    int id = -1;
    if (r.isNew) {
      if (r.value >= 0 && r.value < static_cast<int>(created.size()))
        id = created[r.value];
      if (id < 0) throw ApplyError(opIdx, "anchor references an op that created nothing");
    } else {
      id = r.value;
      if (id < 0 || id >= static_cast<int>(out.nodes.size()))
        throw ApplyError(opIdx, "anchor node does not exist");
    }
    if (!out.node(id).alive) throw ApplyError(opIdx, "anchor node was deleted");
    return id;
  };

  for (size_t i = 0; i < s.ops.size(); ++i) {
    const EditOperation &op = s.ops[i];
    int opIdx = static_cast<int>(i);
    switch (op.type) {
    case EditOpType::Replace: {
      int target = resolve(op.anchor, opIdx);
      if (target == out.root) throw ApplyError(opIdx, "cannot replace the root");
      if (!op.payload) throw ApplyError(opIdx, "replace without payload");
      int parent = out.node(target).parent;
      bool stmt = out.node(target).statementLevel;
      int nid = buildFromPayload(out, *op.payload, stmt);
      auto &kids = out.node(parent).children;
      std::replace(kids.begin(), kids.end(), target, nid);
      out.node(nid).parent = parent;
      killSubtree(out, target);
      created[i] = nid;
      break;
    }
    case EditOpType::Delete: {
      int target = resolve(op.anchor, opIdx);
      if (target == out.root) throw ApplyError(opIdx, "cannot delete the root");
      int parent = out.node(target).parent;
      auto &kids = out.node(parent).children;
      auto at = std::find(kids.begin(), kids.end(), target);
      if (at == kids.end()) throw ApplyError(opIdx, "anchor detached from its parent");
      std::vector<int> grand = out.node(target).children;
      at = kids.erase(at);
      kids.insert(at, grand.begin(), grand.end());
      for (int g : grand) out.node(g).parent = parent;
      out.node(target).alive = false;
      out.node(target).children.clear();
      break;
    }
    case EditOpType::Update: {
      int target = resolve(op.anchor, opIdx);
      if (!op.payload) throw ApplyError(opIdx, "update without payload");
      ApgNode &n = out.node(target);
      std::vector<Component> next;
      std::map<Role, int> seen;
      for (const auto &pc : op.payload->components) {
        Component c(pc.role, pc.value);
        int nth = seen[pc.role]++;
        int skip = nth;
        for (const auto &old : n.components) {
          if (old.role != pc.role) continue;
          if (skip-- == 0) {
            c.span = old.span;
            break;
          }
        }
        next.push_back(std::move(c));
      }
      // Declaration-derived knowledge survives unless the payload re-states
      // the role.
      for (const auto &old : n.components)
        if (old.inferred && !seen.count(old.role)) next.push_back(old);
      n.kind = op.payload->kind;
      n.components = std::move(next);
      rebuildArgOrder(n);
      break;
    }
    case EditOpType::Add: {
      if (!op.payload || !op.pos) throw ApplyError(opIdx, "add without payload or position");
      if (op.pos->asParent) {
        int child = resolve(op.anchor, opIdx);
        if (child == out.root) throw ApplyError(opIdx, "cannot wrap the root");
        int parent = out.node(child).parent;
        int nid = buildFromPayload(out, *op.payload, out.node(child).statementLevel);
        auto &kids = out.node(parent).children;
        std::replace(kids.begin(), kids.end(), child, nid);
        out.node(nid).parent = parent;
        out.node(nid).children.push_back(child);
        out.node(child).parent = nid;
        rebuildArgOrder(out.node(nid));
        created[i] = nid;
        break;
      }
      int parent = resolve(op.anchor, opIdx);
      int idx = op.pos->index, cap = op.pos->captured;
      int have = static_cast<int>(out.node(parent).children.size());
      if (idx < 0 || idx > have)
        throw ApplyError(opIdx, "insertion index out of range");
      if (cap < 0 || idx + cap > have)
        throw ApplyError(opIdx, "captured range out of range");
      bool stmt = isContainerKind(out.node(parent).kind) && !op.pos->iterSlot;
      int nid = buildFromPayload(out, *op.payload, stmt);
      auto &kids = out.node(parent).children; // fresh: buildFromPayload grows nodes
      std::vector<int> capturedKids(kids.begin() + idx, kids.begin() + idx + cap);
      kids.erase(kids.begin() + idx, kids.begin() + idx + cap);
      for (int c : capturedKids) {
        out.node(nid).children.push_back(c);
        out.node(c).parent = nid;
      }
      kids.insert(kids.begin() + idx, nid);
      out.node(nid).parent = parent;
      rebuildArgOrder(out.node(nid));
      if (op.pos->iterSlot && out.node(parent).kind == ApgKind::Loop)
        out.node(parent).iterChildren = std::max(out.node(parent).iterChildren, idx + 1);
      created[i] = nid;
      break;
    }
    }
  }

  for (int id : out.liveNonRoot()) {
    ApgNode &n = out.node(id);
    if (n.kind != ApgKind::MethodCall && n.kind != ApgKind::ObjectCreation) continue;
    int summaries = 0;
    for (const auto &c : n.components)
      if (c.role == Role::ArgSummary && !c.inferred) ++summaries;
    int cnt = summaries + static_cast<int>(n.children.size()) -
              (n.receiverChild ? 1 : 0) - n.iterChildren;
    bool found = false;
    for (auto &c : n.components)
      if (c.role == Role::ArgCount) {
        c.value = std::to_string(cnt);
        found = true;
        break;
      }
    if (!found)
      n.components.emplace_back(Role::ArgCount, std::to_string(cnt));
  }
  return out;
}

namespace {

bool nodesEqual(const Apg &a, int ia, const Apg &b, int ib) {
  const ApgNode &na = a.node(ia);
  const ApgNode &nb = b.node(ib);
  if (na.kind != nb.kind) return false;
  if (na.receiverChild != nb.receiverChild || na.iterChildren != nb.iterChildren)
    return false;
  std::vector<std::pair<Role, std::string>> ca, cb;
  for (const auto &c : na.components)
    if (!c.inferred) ca.emplace_back(c.role, c.value);
  for (const auto &c : nb.components)
    if (!c.inferred) cb.emplace_back(c.role, c.value);
  if (ca != cb) return false;
  std::vector<int> ka, kb;
  for (int c : na.children)
    if (a.node(c).alive) ka.push_back(c);
  for (int c : nb.children)
    if (b.node(c).alive) kb.push_back(c);
  if (ka.size() != kb.size()) return false;
  for (size_t i = 0; i < ka.size(); ++i)
    if (!nodesEqual(a, ka[i], b, kb[i])) return false;
  return true;
}

} // namespace

bool structurallyEqual(const Apg &a, const Apg &b) {
  return nodesEqual(a, a.root, b, b.root);
}

std::string describe(const EditScript &s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.ops.size(); ++i) {
    const EditOperation &op = s.ops[i];
    os << i << ": " << editOpName(op.type) << " ";
    if (op.anchor.isNew)
      os << "new#" << op.anchor.value;
    else
      os << "@" << op.anchor.value;
    if (op.anchorLine > 0) os << " line " << op.anchorLine;
    if (op.pos) {
      if (op.pos->asParent)
        os << " asParent";
      else
        os << " asChild(" << op.pos->index << ")";
      if (op.pos->captured > 0 && !op.pos->asParent) os << " captures " << op.pos->captured;
      if (op.pos->iterSlot) os << " iterSlot";
    }
    if (op.payload) {
      os << " " << apgKindName(op.payload->kind) << "{";
      bool first = true;
      for (const auto &c : op.payload->components) {
        if (!first) os << ", ";
        first = false;
        os << roleName(c.role) << "=" << c.value;
      }
      os << "}";
    }
    os << "\n";
  }
  return os.str();
}

} // namespace refix
