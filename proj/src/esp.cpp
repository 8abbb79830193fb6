#include "refix/esp.hpp"

#include "refix/lexer.hpp"
#include "refix/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace refix {

namespace {

bool parseAbstractDef(const std::string &interior, std::string &key,
                      std::set<std::string> &values, std::string &problem) {
  size_t eq = interior.find('=');
  if (eq == std::string::npos) {
    problem = "expected '_ABSTRACT_k = A | B | ...'";
    return false;
  }
  key = collapseWs(interior.substr(0, eq));
  if (!isAbstractToken(key)) {
    problem = "'" + key + "' is not an abstract token";
    return false;
  }
  std::string rhs = interior.substr(eq + 1);
  std::stringstream ss(rhs);
  std::string item;
  while (std::getline(ss, item, '|')) {
    std::string v = collapseWs(item);
    if (!v.empty()) values.insert(normalizeForCompare(Role::TargetType, v));
  }
  if (values.empty()) {
    problem = "no permissible values listed";
    return false;
  }
  return true;
}

void collectSpecialTokens(const std::string &value, std::set<std::string> &out) {
  SourceText src(value);
  for (const Token &t : tokenize(src))
    if (t.kind == TokenKind::Identifier && isAbstractToken(t.text)) out.insert(t.text);
}

} // namespace

Esp parsePattern(const std::string &text, const std::string &name,
                 std::vector<std::string> &errors) {
  Esp esp;
  esp.name = name;
  esp.source = text;

  ParseOptions opts;
  opts.allowAnnotations = true;
  SyntaxTree tree = parseUnit(makeSource(text, name), opts);
  for (const ParseError &e : tree.errors)
    errors.push_back(name + ": " + describe(e));
  if (!tree.errors.empty()) return esp;

  for (const AstNode &n : tree.nodes) {
    if (n.kind != AstKind::Annotation) continue;
    size_t sep = n.text.find('\x1f');
    std::string annName = sep == std::string::npos ? n.text : n.text.substr(0, sep);
    if (annName != "Abstract") {
      errors.push_back(name + ": unknown annotation '@" + annName + "'");
      continue;
    }
    if (sep == std::string::npos) {
      errors.push_back(name + ": @Abstract needs a parenthesized definition");
      continue;
    }
    std::string key, problem;
    std::set<std::string> values;
    if (!parseAbstractDef(n.text.substr(sep + 1), key, values, problem)) {
      errors.push_back(name + ": malformed @Abstract: " + problem);
      continue;
    }
    if (esp.defs.count(key)) {
      errors.push_back(name + ": duplicate definition of " + key);
      continue;
    }
    esp.defs[key] = std::move(values);
  }

  esp.apg = buildApg(tree);
  if (esp.apg.liveCount() == 0) {
    errors.push_back(name + ": pattern has no statements");
    return esp;
  }

  std::set<std::string> used;
  for (int id : esp.apg.liveNonRoot())
    for (const auto &c : esp.apg.node(id).components) collectSpecialTokens(c.value, used);
  for (const auto &d : esp.apg.declaredTypes) {
    collectSpecialTokens(d.first, used);
    collectSpecialTokens(d.second, used);
  }
  for (const std::string &u : used)
    if (!esp.defs.count(u))
      errors.push_back(name + ": " + u + " is used but never defined");
  for (const auto &d : esp.defs)
    if (!used.count(d.first))
      errors.push_back(name + ": " + d.first + " is defined but never used");
  return esp;
}

bool MatchResult::coversLine(const Apg &snippet, int line) const {
  for (const auto &pr : matched)
    if (snippet.node(pr.second).sourceLine == line) return true;
  return false;
}

MatchResult matchPattern(const Esp &esp, const Apg &snippet) {
  MatchResult r;
  SimilarityScore sc = similarity(esp.apg, snippet, &esp.defs, r.binding);
  r.score = sc.value;
  Alignment al = alignApgs(esp.apg, snippet, &esp.defs);
  for (const auto &pr : al.matchedNodes)
    if (pr.first != esp.apg.root) r.matched.push_back(pr);

  // A bare declaration in the pattern has no node of its own; it scores as
  // one extra comparable that the snippet's declared type must satisfy.
  std::set<std::string> nodeBacked;
  for (int id : esp.apg.liveNonRoot())
    for (const auto &c : esp.apg.node(id).components)
      if (c.role == Role::VarName) nodeBacked.insert(c.value);
  int constraints = 0, satisfied = 0;
  for (const auto &d : esp.apg.declaredTypes) {
    if (nodeBacked.count(d.first)) continue;
    ++constraints;
    std::string name = d.first;
    if (isPatternVarToken(name) || isWildcardToken(name)) {
      auto it = r.binding.map.find(name);
      if (it == r.binding.map.end()) continue;
      name = it->second;
    }
    auto st = snippet.declaredTypes.find(name);
    if (st == snippet.declaredTypes.end()) continue;
    if (matchValues(Role::DeclaredType, d.second, st->second, &esp.defs, &r.binding,
                    false))
      ++satisfied;
  }
  if (constraints > 0) {
    int n = esp.apg.liveCount();
    r.score = (r.score * n + satisfied) / double(n + constraints);
  }
  return r;
}

namespace {

constexpr const char *kManifestHeader = "refix-library v1";
constexpr const char *kVisitedHeader = "refix-visited v1";

std::vector<std::string> splitTabs(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

} // namespace

PatternLibrary loadLibrary(const std::string &dir) {
  PatternLibrary lib;
  fs::path root(dir);
  std::ifstream manifest(root / "manifest.tsv");
  if (!manifest)
    throw std::runtime_error("pattern library: cannot open " +
                             (root / "manifest.tsv").string());
  std::string line;
  if (!std::getline(manifest, line) || line != kManifestHeader)
    throw std::runtime_error("pattern library: bad manifest header");
  std::set<std::string> names;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = splitTabs(line);
    if (f.size() != 4)
      throw std::runtime_error("pattern library: malformed manifest row: " + line);
    if (!names.insert(f[0]).second)
      throw std::runtime_error("pattern library: duplicate pattern name " + f[0]);
    std::ifstream pf(root / f[3]);
    if (!pf)
      throw std::runtime_error("pattern library: missing pattern file " + f[3]);
    std::stringstream buf;
    buf << pf.rdbuf();
    std::vector<std::string> errors;
    Esp esp = parsePattern(buf.str(), f[0], errors);
    if (!errors.empty())
      throw std::runtime_error("pattern library: " + errors.front());
    esp.reType = f[1];
    esp.sourcePostId = f[2];
    lib.patterns.push_back(std::move(esp));
  }

  std::ifstream visited(root / "visited.tsv");
  if (visited) {
    if (!std::getline(visited, line) || line != kVisitedHeader)
      throw std::runtime_error("pattern library: bad visited header");
    while (std::getline(visited, line))
      if (!line.empty()) lib.visited.insert(line);
  }
  return lib;
}

void saveLibrary(const std::string &dir, const PatternLibrary &lib) {
  fs::path root(dir);
  fs::create_directories(root / "patterns");

  std::vector<const Esp *> ordered;
  for (const Esp &e : lib.patterns) ordered.push_back(&e);
  std::sort(ordered.begin(), ordered.end(),
            [](const Esp *a, const Esp *b) { return a->name < b->name; });

  std::ofstream manifest(root / "manifest.tsv");
  manifest << kManifestHeader << "\n";
  for (const Esp *e : ordered) {
    std::string file = "patterns/" + e->name + ".pattern";
    manifest << e->name << "\t" << e->reType << "\t" << e->sourcePostId << "\t" << file
             << "\n";
    std::ofstream pf(root / file);
    pf << e->source;
  }

  std::ofstream visited(root / "visited.tsv");
  visited << kVisitedHeader << "\n";
  for (const std::string &v : lib.visited) visited << v << "\n";
}

const Esp *findPattern(const PatternLibrary &lib, const std::string &name) {
  for (const Esp &e : lib.patterns)
    if (e.name == name) return &e;
  return nullptr;
}

} // namespace refix
