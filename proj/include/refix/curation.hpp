#pragma once

#include "refix/corpus.hpp"
#include "refix/esp.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace refix {

// First question snippet that parses (repaired if needed), as an APG.
std::optional<Apg> firstParsableSnippet(const std::string &body);

// Ranking for the mining queue: votes first, then distance from the posts
// already reviewed (prefer unfamiliar code), then id. Returns nullptr when
// every post was visited.
const Post *suggestNextPost(const std::vector<Post> &posts,
                            const std::set<std::string> &visited);

// Ids of posts whose question code matches the pattern exactly (score 1).
std::vector<std::string> clusterPosts(const Esp &esp, const std::vector<Post> &posts);

struct MiningPrompt {
  const Post *post = nullptr;
  std::string snippet;            // first parsable question snippet
  std::vector<int> highlightLines; // snippet lines the library already explains
  std::vector<std::string> problems; // why the previous pattern was rejected
};

struct MiningVerdict {
  enum Kind { ProvidePattern, Skip, Stop } kind = Skip;
  std::string patternName;
  std::string patternText;
};

using MiningProvider = std::function<MiningVerdict(const MiningPrompt &)>;

struct MiningResult {
  int patternsAdded = 0;
  int postsVisited = 0;
  bool exhausted = false; // ran out of unvisited posts
};

// Semi-automated pattern mining: cluster away what the library already
// covers, then walk the suggestion queue. A provided pattern is parsed and,
// if valid, added (its cluster marked visited); a malformed one re-prompts
// the same post. `unproductiveLimit` consecutive skips end the session.
MiningResult runMiningSession(PatternLibrary &lib, const std::vector<Post> &posts,
                              const std::string &reType, int unproductiveLimit,
                              const MiningProvider &provider);

struct IndexEntry {
  std::string espName;
  std::string postId;
  std::string bestAnswerId;
  double score = 0;
};

// Scores every post of the pattern's exception type by its best answer
// snippet. Posts without a parsable answer snippet score 0.
std::vector<IndexEntry> indexCluster(const Esp &esp, const std::vector<Post> &posts);

// One TSV per exception type; scores at fixed precision so reruns are
// byte-identical.
void saveIndex(const std::string &dir, const std::string &reType,
               const std::vector<IndexEntry> &entries);
std::vector<IndexEntry> loadIndex(const std::string &dir, const std::string &reType);

// indexCluster over every pattern in the library, grouped and saved per type.
void buildIndex(const PatternLibrary &lib, const std::vector<Post> &posts,
                const std::string &dir);

} // namespace refix
