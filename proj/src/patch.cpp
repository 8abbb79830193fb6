#include "refix/patch.hpp"

#include "refix/parser.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace refix {

namespace {

struct TextEdit {
  int begin = 0;
  int end = 0;
  std::string repl;
};

const Component *firstComp(const ApgNode &n, Role r) { return n.find(r); }

std::string compValue(const ApgNode &n, Role r, const std::string &fallback = "") {
  const Component *c = n.find(r);
  return c ? c->value : fallback;
}

class Renderer {
public:
  Renderer(const Apg &original, const Apg &modified)
      : orig_(original), mod_(modified), src_(original.origin) {}

  RenderedPatch run() {
    pairReplacedOccupants();
    collectDeletes();
    collectUpdates();
    collectInserts();
    std::string text = applyEdits();
    RenderedPatch out;
    out.patchedText = text;
    out.emptyDiff = text == src_->text();
    if (!out.emptyDiff)
      out.diffText = unifiedDiff(src_->text(), text, src_->name());
    SyntaxTree reparsed = parseUnit(makeSource(text, src_->name()));
    out.parses = reparsed.errors.empty();
    return out;
  }

private:
  const Apg &orig_;
  const Apg &mod_;
  SourcePtr src_;
  std::vector<TextEdit> edits_;
  std::set<int> lineDeleted_;          // nodes covered by a whole-line removal
  std::map<int, int> replacedBy_;      // synthetic node -> original it stands for
  std::set<int> replacedDead_;         // originals (with descendants) it covers

  bool deadInMod(int id) const {
    return id < static_cast<int>(mod_.nodes.size()) && !mod_.node(id).alive;
  }

  bool liveOriginalIntersects(int beginLine, int endLine, int deadId) const {
    std::set<int> ancestors;
    for (int p = orig_.node(deadId).parent; p >= 0; p = orig_.node(p).parent)
      ancestors.insert(p);
    for (int id : mod_.liveNonRoot()) {
      const ApgNode &n = mod_.node(id);
      if (n.synthetic || !n.stmtSpan.valid() || ancestors.count(id)) continue;
      int a = src_->lineOf(n.stmtSpan.begin);
      int b = src_->lineOf(std::max(n.stmtSpan.begin, n.stmtSpan.end - 1));
      if (a <= endLine && b >= beginLine) return true;
    }
    return false;
  }

  void markHandled(int id) {
    lineDeleted_.insert(id);
    for (int c : orig_.node(id).children) markHandled(c);
  }

  void coverDead(int id) {
    replacedDead_.insert(id);
    for (int c : orig_.node(id).children)
      if (deadInMod(c)) coverDead(c);
  }

  // A synthetic subtree sitting where an original child died renders into
  // that child's extent instead of as a free-standing insertion.
  void pairReplacedOccupants() {
    for (int pid : mod_.preorder()) {
      if (pid >= static_cast<int>(orig_.nodes.size())) continue;
      const ApgNode &mp = mod_.node(pid);
      if (mp.synthetic || !mp.alive || !orig_.node(pid).alive) continue;
      const auto &ok = orig_.node(pid).children;
      const auto &mk = mp.children;
      size_t i = 0, j = 0;
      while (i < ok.size() && j < mk.size()) {
        bool deadHere = deadInMod(ok[i]);
        bool synHere = mod_.node(mk[j]).synthetic;
        if (ok[i] == mk[j]) {
          ++i, ++j;
        } else if (deadHere && synHere) {
          const ApgNode &d = orig_.node(ok[i]);
          if (!d.statementLevel && d.stmtSpan.valid()) {
            replacedBy_[mk[j]] = ok[i];
            coverDead(ok[i]);
          }
          ++i, ++j;
        } else if (deadHere) {
          ++i;
        } else if (synHere) {
          ++j;
        } else {
          ++i, ++j; // differing originals: spliced grandchildren, leave be
        }
      }
    }
  }

  void collectDeletes() {
    // Whole statements whose lines hold nothing else vanish line and all.
    for (int id = 1; id < static_cast<int>(orig_.nodes.size()); ++id) {
      const ApgNode &n = orig_.node(id);
      if (!n.alive || !deadInMod(id) || replacedDead_.count(id)) continue;
      int parent = n.parent;
      if (parent >= 0 && deadInMod(parent)) continue; // not the top of its dead subtree
      if (!n.statementLevel || !n.stmtSpan.valid()) continue;
      int firstLine = src_->lineOf(n.stmtSpan.begin);
      int lastLine = src_->lineOf(std::max(n.stmtSpan.begin, n.stmtSpan.end - 1));
      std::string outside;
      for (int l = firstLine; l <= lastLine; ++l) {
        int ls = src_->lineStart(l), le = src_->lineEnd(l);
        for (int o = ls; o < le; ++o)
          if (o < n.stmtSpan.begin || o >= n.stmtSpan.end) outside += src_->text()[o];
      }
      if (outside.find_first_not_of(" \t\r") != std::string::npos) continue;
      if (liveOriginalIntersects(firstLine, lastLine, id)) continue;
      int begin = src_->lineStart(firstLine);
      int end = std::min(src_->size(), src_->lineEnd(lastLine) + 1);
      edits_.push_back({begin, end, ""});
      markHandled(id);
    }
    // A dead argument inside a live call takes one separator with it.
    for (int id = 1; id < static_cast<int>(orig_.nodes.size()); ++id) {
      const ApgNode &n = orig_.node(id);
      if (!n.alive || !deadInMod(id) || lineDeleted_.count(id) || replacedDead_.count(id))
        continue;
      int parent = n.parent;
      if (parent < 0 || deadInMod(parent)) continue;
      const ApgNode &p = orig_.node(parent);
      bool argParent = p.kind == ApgKind::MethodCall || p.kind == ApgKind::ObjectCreation ||
                       p.kind == ApgKind::ArrayCreation;
      if (!argParent || !p.argListSpan.valid() || !n.stmtSpan.valid()) continue;
      if (n.stmtSpan.begin < p.argListSpan.begin || n.stmtSpan.end > p.argListSpan.end)
        continue;
      int begin = n.stmtSpan.begin, end = n.stmtSpan.end;
      const std::string &t = src_->text();
      int q = begin;
      while (q > p.argListSpan.begin && std::isspace(static_cast<unsigned char>(t[q - 1]))) --q;
      if (q > p.argListSpan.begin && t[q - 1] == ',') {
        begin = q - 1;
      } else {
        q = end;
        while (q < p.argListSpan.end && std::isspace(static_cast<unsigned char>(t[q]))) ++q;
        if (q < p.argListSpan.end && t[q] == ',') {
          ++q;
          while (q < p.argListSpan.end && t[q] == ' ') ++q;
          end = q;
        }
      }
      edits_.push_back({begin, end, ""});
      markHandled(id);
    }
    for (int id = 1; id < static_cast<int>(orig_.nodes.size()); ++id) {
      const ApgNode &n = orig_.node(id);
      if (!n.alive || !deadInMod(id) || lineDeleted_.count(id) || replacedDead_.count(id))
        continue;
      for (const Span &s : n.ownedSpans)
        if (s.valid()) edits_.push_back({s.begin, s.end, ""});
    }
  }

  void deleteWithSeparators(const ApgNode &node, const Component &c) {
    int begin = c.span.begin, end = c.span.end;
    const std::string &t = src_->text();
    if (c.role == Role::ArgSummary && node.argListSpan.valid()) {
      int p = begin;
      while (p > node.argListSpan.begin && std::isspace(static_cast<unsigned char>(t[p - 1]))) --p;
      if (p > node.argListSpan.begin && t[p - 1] == ',') {
        begin = p - 1;
      } else {
        int q = end;
        while (q < node.argListSpan.end && std::isspace(static_cast<unsigned char>(t[q]))) ++q;
        if (q < node.argListSpan.end && t[q] == ',') {
          ++q;
          while (q < node.argListSpan.end && t[q] == ' ') ++q;
          end = q;
        }
      }
    } else if (c.role == Role::ReceiverName && node.kind == ApgKind::MethodCall) {
      int q = end;
      while (q < src_->size() && std::isspace(static_cast<unsigned char>(t[q]))) ++q;
      if (q < src_->size() && t[q] == '.') end = q + 1;
    }
    edits_.push_back({begin, end, ""});
  }

  void collectUpdates() {
    int shared = std::min(orig_.nodes.size(), mod_.nodes.size());
    for (int id = 1; id < shared; ++id) {
      const ApgNode &before = orig_.node(id);
      const ApgNode &after = mod_.node(id);
      if (!before.alive || !after.alive || after.synthetic) continue;

      std::map<Role, std::vector<const Component *>> oldBy, newBy;
      for (const auto &c : before.components) oldBy[c.role].push_back(&c);
      for (const auto &c : after.components) newBy[c.role].push_back(&c);
      std::set<Role> roles;
      for (auto &e : oldBy) roles.insert(e.first);
      for (auto &e : newBy) roles.insert(e.first);

      for (Role r : roles) {
        if (r == Role::ArgCount) continue; // follows from structure
        auto &oldList = oldBy[r];
        auto &newList = newBy[r];
        size_t n = std::max(oldList.size(), newList.size());
        for (size_t k = 0; k < n; ++k) {
          const Component *oc = k < oldList.size() ? oldList[k] : nullptr;
          const Component *nc = k < newList.size() ? newList[k] : nullptr;
          if (oc && nc) {
            if (oc->value != nc->value && oc->span.valid())
              edits_.push_back({oc->span.begin, oc->span.end, nc->value});
          } else if (oc && !nc) {
            if (oc->span.valid() && !oc->inferred) deleteWithSeparators(before, *oc);
          } else if (nc && !oc && !nc->inferred) {
            insertComponent(before, r, nc->value);
          }
        }
      }
    }
  }

  void insertComponent(const ApgNode &node, Role r, const std::string &v) {
    if (r == Role::ArgSummary && node.argListSpan.valid()) {
      std::string interior = src_->slice(node.argListSpan);
      bool empty = interior.find_first_not_of(" \t\r\n") == std::string::npos;
      edits_.push_back({node.argListSpan.end, node.argListSpan.end, empty ? v : ", " + v});
      return;
    }
    if (r == Role::ReceiverName && node.kind == ApgKind::MethodCall) {
      const Component *callee = firstComp(node, Role::CalleeName);
      if (callee && callee->span.valid())
        edits_.push_back({callee->span.begin, callee->span.begin, v + "."});
      return;
    }
    if (r == Role::DeclaredType) {
      const Component *name = firstComp(node, Role::VarName);
      if (name && name->span.valid())
        edits_.push_back({name->span.begin, name->span.begin, v + " "});
      return;
    }
  }

  // --- synthetic rendering ---

  std::string argText(int id) {
    const ApgNode &n = mod_.node(id);
    std::vector<std::string> parts;
    for (const ArgRef &a : n.argOrder) {
      if (a.isChild) {
        if (a.index >= 0 && a.index < static_cast<int>(n.children.size()))
          parts.push_back(exprText(n.children[a.index]));
      } else if (a.index >= 0 && a.index < static_cast<int>(n.components.size())) {
        parts.push_back(n.components[a.index].value);
      }
    }
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ", ";
      out += parts[i];
    }
    return out;
  }

  std::string firstArg(int id) {
    const ApgNode &n = mod_.node(id);
    for (const ArgRef &a : n.argOrder) {
      if (a.isChild && a.index < static_cast<int>(n.children.size()))
        return exprText(n.children[a.index]);
      if (!a.isChild && a.index < static_cast<int>(n.components.size()))
        return n.components[a.index].value;
    }
    return "";
  }

  std::string exprText(int id) {
    const ApgNode &n = mod_.node(id);
    if (!n.synthetic && n.stmtSpan.valid()) return src_->slice(n.stmtSpan);
    switch (n.kind) {
    case ApgKind::MethodCall: {
      std::string recv;
      if (n.receiverChild && !n.children.empty())
        recv = exprText(n.children[0]) + ".";
      else if (const Component *rc = firstComp(n, Role::ReceiverName))
        recv = rc->value + ".";
      return recv + compValue(n, Role::CalleeName, "call") + "(" + argText(id) + ")";
    }
    case ApgKind::ObjectCreation:
      return "new " + compValue(n, Role::TargetType, "Object") + "(" + argText(id) + ")";
    case ApgKind::ArrayCreation:
      return "new " + compValue(n, Role::TargetType, "Object") + "[" + argText(id) + "]";
    case ApgKind::ClassCast:
      return "(" + compValue(n, Role::TargetType, "Object") + ") " + firstArg(id);
    case ApgKind::ArrayAccess: {
      std::string recv = n.receiverChild && !n.children.empty()
                             ? exprText(n.children[0])
                             : compValue(n, Role::ReceiverName, compValue(n, Role::VarName));
      return recv + "[" + argText(id) + "]";
    }
    case ApgKind::BinaryOp: {
      const ApgNode &b = n;
      std::string op = compValue(b, Role::Operator, "+");
      std::vector<std::string> parts;
      for (const ArgRef &a : b.argOrder) {
        if (a.isChild && a.index < static_cast<int>(b.children.size()))
          parts.push_back(exprText(b.children[a.index]));
        else if (!a.isChild && a.index < static_cast<int>(b.components.size()))
          parts.push_back(b.components[a.index].value);
      }
      std::string out;
      for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " " + op + " ";
        out += parts[i];
      }
      return out;
    }
    case ApgKind::Assignment: {
      std::string op = compValue(n, Role::Operator, "=");
      std::string rhs = firstArg(id);
      return compValue(n, Role::VarName, "x") + (rhs.empty() ? op : " " + op + " " + rhs);
    }
    case ApgKind::VarDecl: {
      std::string init = firstArg(id);
      std::string head =
          compValue(n, Role::DeclaredType, "Object") + " " + compValue(n, Role::VarName, "x");
      return init.empty() ? head : head + " = " + init;
    }
    case ApgKind::Literal:
    case ApgKind::VarRef:
      return compValue(n, Role::ArgSummary, compValue(n, Role::VarName));
    case ApgKind::ReturnStmt: {
      std::string v = firstArg(id);
      if (v.empty()) v = compValue(n, Role::ArgSummary);
      return v.empty() ? "return" : "return " + v;
    }
    case ApgKind::ThrowStmt:
      return "throw " + firstArg(id);
    default:
      return compValue(n, Role::ArgSummary);
    }
  }

  bool blockKind(ApgKind k) const {
    return k == ApgKind::Loop || k == ApgKind::Condition || k == ApgKind::TryCatch;
  }

  std::vector<std::string> statementLines(int id, int depth) {
    const ApgNode &n = mod_.node(id);
    std::string pad(depth * 4, ' ');
    std::vector<std::string> out;
    if (!blockKind(n.kind)) {
      out.push_back(pad + exprText(id) + ";");
      return out;
    }
    std::string header;
    int bodyFrom = 0;
    if (n.kind == ApgKind::Loop) {
      const Component *vn = firstComp(n, Role::VarName);
      if (vn) {
        std::string iter;
        if (n.iterChildren > 0 && !n.children.empty())
          iter = exprText(n.children[0]);
        else
          iter = compValue(n, Role::ReceiverName);
        header = "for (" + compValue(n, Role::DeclaredType, "Object") + " " + vn->value +
                 " : " + iter + ") {";
        bodyFrom = n.iterChildren;
      } else {
        header = "while (" + compValue(n, Role::ArgSummary, "true") + ") {";
      }
    } else if (n.kind == ApgKind::Condition) {
      header = "if (" + compValue(n, Role::ArgSummary, "true") + ") {";
    } else {
      header = "try {";
    }
    out.push_back(pad + header);
    for (int i = bodyFrom; i < static_cast<int>(n.children.size()); ++i) {
      auto inner = statementLines(n.children[i], depth + 1);
      out.insert(out.end(), inner.begin(), inner.end());
    }
    if (n.kind == ApgKind::TryCatch) {
      std::string handler = compValue(n, Role::TargetType, "Exception") + " " +
                            compValue(n, Role::VarName, "e");
      out.push_back(pad + "} catch (" + handler + ") {");
      out.push_back(pad + "}");
    } else {
      out.push_back(pad + "}");
    }
    return out;
  }

  std::string indentOfLine(int line) const {
    std::string t = src_->lineText(line);
    size_t n = t.find_first_not_of(" \t");
    return n == std::string::npos ? t : t.substr(0, n);
  }

  bool hasOriginalDescendant(int id, int &minBegin, int &maxEnd) {
    const ApgNode &n = mod_.node(id);
    bool any = false;
    if (!n.synthetic && n.stmtSpan.valid()) {
      minBegin = std::min(minBegin, n.stmtSpan.begin);
      maxEnd = std::max(maxEnd, n.stmtSpan.end);
      any = true;
    }
    for (int c : n.children) {
      if (hasOriginalDescendant(c, minBegin, maxEnd)) any = true;
    }
    return any;
  }

  void collectInserts() {
    for (int id : mod_.preorder()) {
      const ApgNode &n = mod_.node(id);
      if (!n.synthetic || n.parent < 0) continue;
      if (mod_.node(n.parent).synthetic) continue;
      insertSubtree(id);
    }
  }

  void insertSubtree(int id) {
    const ApgNode &n = mod_.node(id);
    const ApgNode &p = mod_.node(n.parent);
    auto twin = replacedBy_.find(id);
    if (twin != replacedBy_.end()) {
      const Span &s = orig_.node(twin->second).stmtSpan;
      edits_.push_back({s.begin, s.end, exprText(id)});
      return;
    }
    int minBegin = src_->size() + 1, maxEnd = -1;
    bool wraps = false;
    for (int c : n.children)
      if (hasOriginalDescendant(c, minBegin, maxEnd)) wraps = true;
    if (wraps) {
      insertWrap(id, minBegin, maxEnd);
      return;
    }

    int childIdx = 0;
    for (size_t i = 0; i < p.children.size(); ++i)
      if (p.children[i] == id) childIdx = static_cast<int>(i);

    if (p.kind == ApgKind::Loop && childIdx < p.iterChildren && p.iterSlotSpan.valid()) {
      edits_.push_back({p.iterSlotSpan.begin, p.iterSlotSpan.begin, exprText(id)});
      return;
    }
    bool argParent = p.kind == ApgKind::MethodCall || p.kind == ApgKind::ObjectCreation ||
                     p.kind == ApgKind::ArrayCreation;
    if (argParent && p.argListSpan.valid()) {
      int lastPrev = -1;
      for (int i = childIdx - 1; i >= (p.receiverChild ? 1 : 0); --i) {
        const ApgNode &sib = mod_.node(p.children[i]);
        if (!sib.synthetic && sib.stmtSpan.valid()) {
          lastPrev = sib.stmtSpan.end;
          break;
        }
      }
      if (lastPrev >= 0) {
        edits_.push_back({lastPrev, lastPrev, ", " + exprText(id)});
        return;
      }
      std::string interior = src_->slice(p.argListSpan);
      bool empty = interior.find_first_not_of(" \t\r\n") == std::string::npos;
      std::string text = exprText(id);
      if (!empty) text += ", ";
      edits_.push_back({p.argListSpan.begin, p.argListSpan.begin, text});
      return;
    }

    // Statement position: before the next original sibling, after the
    // previous one, or directly under the parent's header line.
    int offset = -1;
    std::string indent;
    int skipLead = p.kind == ApgKind::Loop ? p.iterChildren : 0;
    for (size_t i = childIdx + 1; i < p.children.size(); ++i) {
      const ApgNode &sib = mod_.node(p.children[i]);
      if (static_cast<int>(i) < skipLead || sib.synthetic || !sib.stmtSpan.valid()) continue;
      int line = src_->lineOf(sib.stmtSpan.begin);
      offset = src_->lineStart(line);
      indent = indentOfLine(line);
      break;
    }
    if (offset < 0) {
      for (int i = childIdx - 1; i >= skipLead; --i) {
        const ApgNode &sib = mod_.node(p.children[i]);
        if (sib.synthetic || !sib.stmtSpan.valid()) continue;
        int line = src_->lineOf(std::max(sib.stmtSpan.begin, sib.stmtSpan.end - 1));
        offset = std::min(src_->size(), src_->lineEnd(line) + 1);
        indent = indentOfLine(line);
        break;
      }
    }
    std::string prefix;
    if (offset < 0) {
      if (n.parent == mod_.root || !p.stmtSpan.valid()) {
        offset = src_->size();
        if (offset > 0 && src_->text()[offset - 1] != '\n') prefix = "\n";
      } else {
        int line = src_->lineOf(p.stmtSpan.begin);
        offset = std::min(src_->size(), src_->lineEnd(line) + 1);
        indent = indentOfLine(line) + "    ";
      }
    }
    std::string text = prefix;
    for (const std::string &l : statementLines(id, 0)) text += indent + l + "\n";
    edits_.push_back({offset, offset, text});
  }

  void insertWrap(int id, int minBegin, int maxEnd) {
    const ApgNode &n = mod_.node(id);
    std::string pre, suf;
    switch (n.kind) {
    case ApgKind::ClassCast:
      pre = "(" + compValue(n, Role::TargetType, "Object") + ") ";
      break;
    case ApgKind::ObjectCreation:
      pre = "new " + compValue(n, Role::TargetType, "Object") + "(";
      suf = ")";
      break;
    case ApgKind::ArrayCreation:
      pre = "new " + compValue(n, Role::TargetType, "Object") + "[";
      suf = "]";
      break;
    case ApgKind::MethodCall: {
      std::string recv;
      if (const Component *rc = firstComp(n, Role::ReceiverName)) recv = rc->value + ".";
      pre = recv + compValue(n, Role::CalleeName, "call") + "(";
      suf = ")";
      break;
    }
    case ApgKind::Condition:
    case ApgKind::Loop: {
      int firstLine = src_->lineOf(minBegin);
      int lastLine = src_->lineOf(std::max(minBegin, maxEnd - 1));
      std::string indent = indentOfLine(firstLine);
      std::string header = n.kind == ApgKind::Condition
                               ? "if (" + compValue(n, Role::ArgSummary, "true") + ") {"
                               : "while (" + compValue(n, Role::ArgSummary, "true") + ") {";
      edits_.push_back({src_->lineStart(firstLine), src_->lineStart(firstLine),
                        indent + header + "\n"});
      int after = std::min(src_->size(), src_->lineEnd(lastLine) + 1);
      edits_.push_back({after, after, indent + "}\n"});
      return;
    }
    default:
      return;
    }
    edits_.push_back({minBegin, minBegin, pre});
    if (!suf.empty()) edits_.push_back({maxEnd, maxEnd, suf});
  }

  std::string applyEdits() {
    std::stable_sort(edits_.begin(), edits_.end(), [](const TextEdit &a, const TextEdit &b) {
      if (a.begin != b.begin) return a.begin < b.begin;
      return a.end < b.end;
    });
    const std::string &t = src_->text();
    std::string out;
    int cursor = 0;
    for (const TextEdit &e : edits_) {
      if (e.begin < cursor) continue; // overlap, first edit wins
      out += t.substr(cursor, e.begin - cursor);
      out += e.repl;
      cursor = e.end;
    }
    out += t.substr(cursor);
    return out;
  }
};

std::vector<std::string> splitLines(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

} // namespace

RenderedPatch renderPatch(const Apg &original, const Apg &modified) {
  Renderer r(original, modified);
  return r.run();
}

std::string unifiedDiff(const std::string &aText, const std::string &bText,
                        const std::string &label) {
  std::vector<std::string> a = splitLines(aText);
  std::vector<std::string> b = splitLines(bText);
  size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);

  struct Row {
    char tag; // ' ', '-', '+'
    const std::string *text;
    size_t aLine, bLine; // 1-based, 0 when absent
  };
  std::vector<Row> rows;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      rows.push_back({' ', &a[i], i + 1, j + 1});
      ++i, ++j;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      rows.push_back({'-', &a[i], i + 1, 0});
      ++i;
    } else {
      rows.push_back({'+', &b[j], 0, j + 1});
      ++j;
    }
  }
  while (i < n) rows.push_back({'-', &a[i], i + 1, 0}), ++i;
  while (j < m) rows.push_back({'+', &b[j], 0, j + 1}), ++j;

  bool any = false;
  for (const Row &r : rows)
    if (r.tag != ' ') any = true;
  if (!any) return "";

  const int ctx = 3;
  std::ostringstream os;
  os << "--- a/" << label << "\n+++ b/" << label << "\n";

  size_t k = 0;
  while (k < rows.size()) {
    if (rows[k].tag == ' ') {
      ++k;
      continue;
    }
    size_t start = k >= static_cast<size_t>(ctx) ? k - ctx : 0;
    // widen start to not cross a previous hunk: handled by emission loop below
    size_t end = k;
    size_t lastChange = k;
    while (end < rows.size()) {
      if (rows[end].tag != ' ') {
        lastChange = end;
        ++end;
        continue;
      }
      // stop when a run of more than 2*ctx context separates changes
      size_t run = 0;
      size_t probe = end;
      while (probe < rows.size() && rows[probe].tag == ' ') ++probe, ++run;
      if (probe == rows.size() || run > static_cast<size_t>(2 * ctx)) break;
      end = probe;
    }
    size_t hunkEnd = std::min(rows.size(), lastChange + 1 + ctx);
    size_t aStart = 0, bStart = 0, aCount = 0, bCount = 0;
    for (size_t r = start; r < hunkEnd; ++r) {
      if (rows[r].tag != '+') {
        if (aCount == 0) aStart = rows[r].aLine;
        ++aCount;
      }
      if (rows[r].tag != '-') {
        if (bCount == 0) bStart = rows[r].bLine;
        ++bCount;
      }
    }
    if (aCount == 0) aStart = rows.empty() ? 0 : (start > 0 ? rows[start - 1].aLine : 0);
    if (bCount == 0) bStart = rows.empty() ? 0 : (start > 0 ? rows[start - 1].bLine : 0);
    os << "@@ -" << aStart;
    if (aCount != 1) os << "," << aCount;
    os << " +" << bStart;
    if (bCount != 1) os << "," << bCount;
    os << " @@\n";
    for (size_t r = start; r < hunkEnd; ++r)
      os << rows[r].tag << *rows[r].text << "\n";
    k = hunkEnd;
  }
  return os.str();
}

} // namespace refix
