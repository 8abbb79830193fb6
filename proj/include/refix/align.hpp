#pragma once

#include "refix/apg.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace refix {

// _ABSTRACT_k -> permissible concrete names (normalized at load time).
using AbstractDefs = std::map<std::string, std::set<std::string>>;

bool isWildcardToken(const std::string &s);
bool isAbstractToken(const std::string &s);
bool isPatternVarToken(const std::string &s);
bool isSpecialToken(const std::string &s);

// Greedy assignment of pattern tokens to concrete tokens, extended in
// pattern-preorder while scoring; a token never rebinds.
struct Binding {
  std::map<std::string, std::string> map;

  // True if tok can stand for `concrete`, binding it when unbound.
  bool bindCheck(const std::string &tok, const std::string &concrete);
};

// Token-level value comparison. `defs` resolves _ABSTRACT_k membership;
// `binding` (optional) enforces consistent substitution; `symmetric` lets
// special tokens appear on either side.
bool matchValues(Role role, const std::string &xVal, const std::string &yVal,
                 const AbstractDefs *defs, Binding *binding, bool symmetric);

enum class FractionMode { Cost, Pattern };

// Fraction of matching components between two nodes under per-role positional
// pairing. Cost mode: matched / max(counted_x, counted_y). Pattern mode:
// matched / counted_x. Inferred components lacking a counterpart are skipped.
double componentFraction(const ApgNode &x, const ApgNode &y, FractionMode mode,
                         const AbstractDefs *defs, Binding *binding, bool symmetric);

bool kindsCompatible(ApgKind a, ApgKind b);

struct CorrEntry {
  std::string from;
  std::string to;
};

struct Alignment {
  std::vector<std::pair<int, int>> matchedNodes; // (x id, y id), root pair included
  std::vector<CorrEntry> corrValues;             // component-value pairs
  std::map<std::string, std::string> tokenMap;   // x token -> y token, first wins
  std::map<int, int> lineMap;                    // x line -> y line
  double cost = 0;

  std::optional<int> mapped(int xId) const {
    for (auto &p : matchedNodes)
      if (p.first == xId) return p.second;
    return std::nullopt;
  }
};

// Optimal tree edit distance (insert/delete cost 1, rename cost
// 1 - componentFraction when kinds are compatible, 1 otherwise) plus the
// node mapping realizing it. Special tokens match symmetrically.
Alignment alignApgs(const Apg &x, const Apg &y, const AbstractDefs *defs = nullptr);

// Exhaustive-search edit distance over all valid ordered-tree mappings;
// exponential, only sane for tiny trees. Oracle for alignApgs.
double bruteForceEditDistance(const Apg &x, const Apg &y, const AbstractDefs *defs = nullptr);

struct SimilarityScore {
  double value = 0;
  std::vector<std::pair<int, double>> perNodeBreakdown; // (pattern node id, fraction)
};

// Pattern-sided score: mean matched-component fraction over the pattern's
// non-root nodes, with greedy binding extension in pattern preorder.
SimilarityScore similarity(const Apg &pattern, const Apg &snippet, const AbstractDefs *defs,
                           Binding &binding);

// 1 - symmetric similarity normalized by max node count; 0 for identical
// snippets, symmetric in its arguments.
double snippetDistance(const Apg &a, const Apg &b, const AbstractDefs *defs = nullptr);

} // namespace refix
