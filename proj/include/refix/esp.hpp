#pragma once

#include "refix/align.hpp"
#include "refix/apg.hpp"

#include <set>
#include <string>
#include <vector>

namespace refix {

// Exception scenario pattern: an abstracted snippet with placeholder rules.
struct Esp {
  std::string name;
  std::string reType; // runtime exception type it addresses
  std::string sourcePostId;
  std::string source; // pattern text, annotations included
  Apg apg;
  AbstractDefs defs;
};

// Parses pattern text: leading @Abstract(...) annotations define the
// permissible values of _ABSTRACT_k tokens, the rest is a snippet. Problems
// (unparsable snippet, malformed or duplicate definitions, undefined or
// unused abstract tokens, empty pattern) are appended to `errors`.
Esp parsePattern(const std::string &text, const std::string &name,
                 std::vector<std::string> &errors);

struct MatchResult {
  double score = 0;
  Binding binding;
  std::vector<std::pair<int, int>> matched; // (pattern node, snippet node)

  bool coversLine(const Apg &snippet, int line) const;
};

MatchResult matchPattern(const Esp &esp, const Apg &snippet);

struct PatternLibrary {
  std::vector<Esp> patterns;
  std::set<std::string> visited; // post ids already reviewed during mining
};

// Directory layout: manifest.tsv (name, reType, sourcePostId, file),
// visited.tsv, patterns/*.pattern.
PatternLibrary loadLibrary(const std::string &dir);
void saveLibrary(const std::string &dir, const PatternLibrary &lib);

const Esp *findPattern(const PatternLibrary &lib, const std::string &name);

} // namespace refix
