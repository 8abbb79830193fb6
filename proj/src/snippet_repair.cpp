#include "refix/snippet_repair.hpp"

#include "refix/apg.hpp"

#include <algorithm>

namespace refix {

namespace {

bool isNumericType(const std::string &t) {
  return t == "int" || t == "long" || t == "short" || t == "byte" || t == "char" ||
         t == "float" || t == "double" || t == "Integer" || t == "Long" ||
         t == "Short" || t == "Byte" || t == "Float" || t == "Double";
}

std::string baseName(const std::string &type) {
  std::string base = eraseGenerics(type);
  size_t dot = base.rfind('.');
  return dot == std::string::npos ? base : base.substr(dot + 1);
}

} // namespace

std::string defaultInitializer(const std::string &type) {
  if (type.empty()) return "0";
  std::string raw = type;
  if (raw.size() > 2 && raw.compare(raw.size() - 2, 2, "[]") == 0)
    return "new " + raw.substr(0, raw.size() - 2) + "[0]";
  std::string base = baseName(raw);
  if (isNumericType(base)) return "0";
  if (base == "boolean" || base == "Boolean") return "false";
  if (base == "String" || base == "CharSequence") return "\"\"";
  if (base == "List" || base == "ArrayList" || base == "Collection" ||
      base == "Iterable")
    return "new ArrayList<>()";
  if (base == "Set" || base == "HashSet") return "new HashSet<>()";
  if (base == "Map" || base == "HashMap") return "new HashMap<>()";
  if (base == "Queue" || base == "Deque" || base == "LinkedList")
    return "new LinkedList<>()";
  return "new " + eraseGenerics(raw) + "()";
}

namespace {

struct Rewrite {
  int begin = 0;
  int end = 0;
  std::string repl;
  std::string action;
};

// Deleting a token swallows one adjacent space so `a @# b` heals to `a b`.
Rewrite deleteTokenAt(const SourceText &src, int offset, int length) {
  const std::string &t = src.text();
  int begin = offset, end = offset + length;
  if (end < src.size() && t[end] == ' ') {
    ++end;
  } else if (begin > 0 && t[begin - 1] == ' ') {
    --begin;
  }
  // A token alone on its line takes the line with it.
  int line = src.lineOf(offset);
  int ls = src.lineStart(line), le = src.lineEnd(line);
  bool onlyToken = true;
  for (int o = ls; o < le; ++o) {
    if (o >= begin && o < end) continue;
    if (!std::isspace(static_cast<unsigned char>(t[o]))) {
      onlyToken = false;
      break;
    }
  }
  if (onlyToken) {
    begin = ls;
    end = std::min(src.size(), le + 1);
  }
  return {begin, end, "", "delete"};
}

Rewrite planRewrite(const SourceText &src, const ParseError &e) {
  switch (e.category) {
  case ErrorCategory::InvalidToken:
    if (e.expectKind == ExpectKind::Rule && e.expected == "expression")
      return {e.offset, e.offset + e.length, defaultInitializer(e.typeHint),
              "replace-with-default"};
    return deleteTokenAt(src, e.offset, e.length);
  case ErrorCategory::ExtraToken:
    return deleteTokenAt(src, e.offset, e.length);
  case ErrorCategory::MissingToken:
    if (e.expectKind == ExpectKind::Symbol)
      return {e.offset, e.offset, e.expected, "insert-symbol"};
    if (e.expected == "catch-or-finally")
      return {e.offset, e.offset, " catch (Exception e) { }", "insert-handler"};
    if (e.expected == "block")
      return {e.offset, e.offset, " { }", "insert-block"};
    return {e.offset, e.offset,
            e.offset > 0 && !std::isspace(static_cast<unsigned char>(src.text()[e.offset - 1]))
                ? " " + defaultInitializer(e.typeHint)
                : defaultInitializer(e.typeHint),
            "insert-default"};
  }
  return {e.offset, e.offset, "", "noop"};
}

} // namespace

RepairOutcome repairSnippet(const std::string &text, ParseOptions opts,
                            const std::string &name) {
  RepairOutcome out;
  std::string current = text;
  out.tree = parseUnit(makeSource(current, name), opts);
  out.repaired = out.tree.src;
  out.errorCounts.push_back(static_cast<int>(out.tree.errors.size()));
  if (out.tree.errors.empty()) {
    out.parsable = true;
    return out;
  }

  size_t lastCount = out.tree.errors.size();
  for (int round = 0; round < 64; ++round) {
    const ParseError &e = out.tree.errors.front(); // errors sorted by offset
    Rewrite rw = planRewrite(*out.tree.src, e);
    if (rw.begin == rw.end && rw.repl.empty()) break;

    // A rewrite only sticks when it strictly shrinks the error count; an
    // unproductive one is rolled back so the outcome is the best state seen.
    std::string candidate =
        current.substr(0, rw.begin) + rw.repl + current.substr(rw.end);
    SyntaxTree tree = parseUnit(makeSource(candidate, name), opts);
    if (!tree.errors.empty() && tree.errors.size() >= lastCount) break;

    RepairStep step;
    step.action = rw.action;
    step.line = e.line;
    step.removed = current.substr(rw.begin, rw.end - rw.begin);
    step.inserted = rw.repl;
    out.steps.push_back(step);

    current = std::move(candidate);
    out.changed = true;
    out.tree = std::move(tree);
    out.repaired = out.tree.src;
    out.errorCounts.push_back(static_cast<int>(out.tree.errors.size()));
    if (out.tree.errors.empty()) {
      out.parsable = true;
      return out;
    }
    lastCount = out.tree.errors.size();
  }
  out.parsable = false;
  return out;
}

} // namespace refix
