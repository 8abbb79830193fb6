#pragma once

#include "refix/corpus.hpp"
#include "refix/curation.hpp"
#include "refix/esp.hpp"
#include "refix/parser.hpp"

#include <string>
#include <vector>

namespace refix {

struct FixConfig {
  int k = 3;         // patches to return
  int z = 15;        // posts to examine
  double tau = 0.5;  // pattern acceptance threshold
  bool parallel = false;
};

struct PatchCandidate {
  std::string postId;
  std::string answerId;
  std::string questionSnippet;
  std::string diff;
  std::string patchedText;
  double postScore = 0;
};

struct FixDiagnostics {
  std::string chosenPattern;
  double patternScore = 0;
  int postsExamined = 0;
  int pairsTried = 0;
  int skippedNoOverlap = 0;   // triangulation found no relevant question lines
  int skippedEmptyScript = 0; // nothing to change or every op dropped
  int skippedApplyError = 0;
  int skippedInvalidApg = 0;
  int skippedUnparsable = 0;  // patched text failed to re-parse
  int skippedEmptyDiff = 0;
  int skippedDuplicate = 0;
  int opsDropped = 0; // adaptation casualties across both hops
  std::vector<std::string> notes;
};

struct FixResult {
  std::vector<PatchCandidate> patches;
  std::string fallbackPostId; // rank-1 post when nothing synthesized
  FixDiagnostics diagnostics;

  bool any() const { return !patches.empty() || !fallbackPostId.empty(); }
};

// APG of the method body enclosing `failLine` (whole file when no method
// contains it). `methodLine` receives the method's first line when found.
Apg extractBuggyWindow(const SyntaxTree &tree, int failLine, int *methodLine = nullptr);

// Highest-scoring pattern of the exception type whose matched region covers
// the failing line and whose score clears tau. Ties prefer more nodes, then
// name order. Null when nothing qualifies.
const Esp *findBestPattern(const PatternLibrary &lib, const std::string &reType,
                           const Apg &window, int failLine, double tau,
                           MatchResult *match = nullptr);

// End-to-end repair: choose a pattern, walk the indexed posts, and for each
// question/answer snippet pair triangulate, prune, derive, adapt twice,
// apply, and render, keeping the first k distinct patches.
FixResult fix(const std::string &fileText, const std::string &fileName, int failLine,
              const std::string &reType, const PatternLibrary &lib,
              const std::vector<Post> &posts, const std::vector<IndexEntry> &index,
              const FixConfig &cfg = {});

} // namespace refix
