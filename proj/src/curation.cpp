#include "refix/curation.hpp"

#include "refix/snippet_repair.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace refix {

std::optional<Apg> firstParsableSnippet(const std::string &body) {
  for (const std::string &code : extractSnippets(body)) {
    RepairOutcome r = repairSnippet(code);
    if (r.parsable) return buildApg(r.tree);
  }
  return std::nullopt;
}

const Post *suggestNextPost(const std::vector<Post> &posts,
                            const std::set<std::string> &visited) {
  // Reference pool: code of the posts already reviewed.
  std::vector<Apg> pool;
  for (const Post &p : posts) {
    if (!visited.count(p.id)) continue;
    if (auto apg = firstParsableSnippet(p.questionBody)) pool.push_back(std::move(*apg));
  }

  const Post *best = nullptr;
  double bestDist = -1;
  for (const Post &p : posts) {
    if (visited.count(p.id)) continue;
    double dist = 1.0;
    if (!pool.empty()) {
      auto apg = firstParsableSnippet(p.questionBody);
      if (apg) {
        double sum = 0;
        for (const Apg &ref : pool) sum += snippetDistance(*apg, ref);
        dist = sum / static_cast<double>(pool.size());
      } else {
        dist = 1.0;
      }
    }
    if (!best || p.votes > best->votes ||
        (p.votes == best->votes && dist > bestDist + 1e-12) ||
        (p.votes == best->votes && std::abs(dist - bestDist) <= 1e-12 && p.id < best->id)) {
      best = &p;
      bestDist = dist;
    }
  }
  return best;
}

namespace {

bool matchesExactly(const Esp &esp, const Post &post) {
  for (const std::string &code : extractSnippets(post.questionBody)) {
    RepairOutcome r = repairSnippet(code);
    if (!r.parsable) continue;
    Apg apg = buildApg(r.tree);
    if (apg.liveCount() == 0) continue;
    MatchResult m = matchPattern(esp, apg);
    if (m.score >= 1.0 - 1e-9) return true;
  }
  return false;
}

} // namespace

std::vector<std::string> clusterPosts(const Esp &esp, const std::vector<Post> &posts) {
  std::vector<std::string> out;
  for (const Post &p : posts) {
    if (p.reType != esp.reType) continue;
    if (matchesExactly(esp, p)) out.push_back(p.id);
  }
  return out;
}

MiningResult runMiningSession(PatternLibrary &lib, const std::vector<Post> &posts,
                              const std::string &reType, int unproductiveLimit,
                              const MiningProvider &provider) {
  MiningResult result;
  std::vector<Post> scoped;
  for (const Post &p : posts)
    if (p.reType == reType) scoped.push_back(p);

  for (const Esp &esp : lib.patterns) {
    if (esp.reType != reType) continue;
    for (const std::string &id : clusterPosts(esp, scoped)) lib.visited.insert(id);
  }

  int streak = 0;
  std::vector<std::string> pendingProblems;
  while (streak < unproductiveLimit) {
    const Post *post = suggestNextPost(scoped, lib.visited);
    if (!post) {
      result.exhausted = true;
      break;
    }

    MiningPrompt prompt;
    prompt.post = post;
    for (const std::string &code : extractSnippets(post->questionBody)) {
      RepairOutcome r = repairSnippet(code);
      if (r.parsable) {
        prompt.snippet = r.repaired->text();
        Apg apg = buildApg(r.tree);
        // Lines the current library already explains, for the reviewer.
        std::set<int> lines;
        for (const Esp &esp : lib.patterns) {
          if (esp.reType != reType) continue;
          MatchResult m = matchPattern(esp, apg);
          for (const auto &pr : m.matched) lines.insert(apg.node(pr.second).sourceLine);
        }
        prompt.highlightLines.assign(lines.begin(), lines.end());
        break;
      }
    }
    prompt.problems = pendingProblems;
    pendingProblems.clear();

    MiningVerdict v = provider(prompt);
    if (v.kind == MiningVerdict::Stop) break;
    if (v.kind == MiningVerdict::Skip) {
      lib.visited.insert(post->id);
      ++result.postsVisited;
      ++streak;
      continue;
    }

    std::vector<std::string> errors;
    Esp esp = parsePattern(v.patternText, v.patternName, errors);
    if (errors.empty() && findPattern(lib, v.patternName))
      errors.push_back(v.patternName + ": a pattern with this name already exists");
    if (!errors.empty()) {
      // Same post comes back with the diagnosis; nothing was consumed.
      pendingProblems = std::move(errors);
      continue;
    }
    esp.reType = reType;
    esp.sourcePostId = post->id;
    lib.patterns.push_back(std::move(esp));
    lib.visited.insert(post->id);
    ++result.postsVisited;
    ++result.patternsAdded;
    for (const std::string &id : clusterPosts(lib.patterns.back(), scoped)) {
      if (lib.visited.insert(id).second) ++result.postsVisited;
    }
    streak = 0;
  }
  return result;
}

std::vector<IndexEntry> indexCluster(const Esp &esp, const std::vector<Post> &posts) {
  std::vector<IndexEntry> out;
  std::vector<const Post *> scoped;
  for (const Post &p : posts)
    if (p.reType == esp.reType) scoped.push_back(&p);

  for (const Post *p : scoped) {
    IndexEntry e;
    e.espName = esp.name;
    e.postId = p->id;
    double bestScore = -1;
    int bestVotes = 0;
    std::string bestId;
    for (const Answer &a : p->answers) {
      double answerBest = -1;
      for (const std::string &code : extractSnippets(a.body)) {
        RepairOutcome r = repairSnippet(code);
        if (!r.parsable) continue;
        Apg apg = buildApg(r.tree);
        if (apg.liveCount() == 0) continue;
        MatchResult m = matchPattern(esp, apg);
        answerBest = std::max(answerBest, m.score);
      }
      if (answerBest < 0) continue;
      bool better = answerBest > bestScore + 1e-12 ||
                    (std::abs(answerBest - bestScore) <= 1e-12 &&
                     (a.votes > bestVotes || (a.votes == bestVotes && a.id < bestId)));
      if (bestId.empty() || better) {
        bestScore = answerBest;
        bestVotes = a.votes;
        bestId = a.id;
      }
    }
    e.score = bestScore < 0 ? 0.0 : bestScore;
    e.bestAnswerId = bestId;
    out.push_back(std::move(e));
  }

  std::map<std::string, int> votesOf;
  for (const Post *p : scoped) votesOf[p->id] = p->votes;
  std::sort(out.begin(), out.end(), [&](const IndexEntry &a, const IndexEntry &b) {
    if (std::abs(a.score - b.score) > 1e-12) return a.score > b.score;
    int va = votesOf[a.postId], vb = votesOf[b.postId];
    if (va != vb) return va > vb;
    return a.postId < b.postId;
  });
  return out;
}

namespace {

constexpr const char *kIndexHeader = "refix-index v1";

std::string formatScore(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << s;
  return os.str();
}

} // namespace

void saveIndex(const std::string &dir, const std::string &reType,
               const std::vector<IndexEntry> &entries) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / (reType + ".tsv"));
  out << kIndexHeader << "\n";
  for (const IndexEntry &e : entries)
    out << e.espName << "\t" << e.postId << "\t" << e.bestAnswerId << "\t"
        << formatScore(e.score) << "\n";
}

std::vector<IndexEntry> loadIndex(const std::string &dir, const std::string &reType) {
  fs::path path = fs::path(dir) / (reType + ".tsv");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("index: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kIndexHeader)
    throw std::runtime_error("index: bad header in " + path.string());
  std::vector<IndexEntry> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == '\t') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    if (f.size() != 4) throw std::runtime_error("index: malformed row: " + line);
    IndexEntry e;
    e.espName = f[0];
    e.postId = f[1];
    e.bestAnswerId = f[2];
    e.score = std::stod(f[3]);
    out.push_back(std::move(e));
  }
  return out;
}

void buildIndex(const PatternLibrary &lib, const std::vector<Post> &posts,
                const std::string &dir) {
  std::map<std::string, std::vector<IndexEntry>> byType;
  for (const Esp &esp : lib.patterns) {
    std::vector<IndexEntry> entries = indexCluster(esp, posts);
    auto &bucket = byType[esp.reType];
    bucket.insert(bucket.end(), entries.begin(), entries.end());
  }
  for (auto &e : byType) {
    std::map<std::string, int> votesOf;
    for (const Post &p : posts) votesOf[p.id] = p.votes;
    std::sort(e.second.begin(), e.second.end(),
              [&](const IndexEntry &a, const IndexEntry &b) {
                if (std::abs(a.score - b.score) > 1e-12) return a.score > b.score;
                int va = votesOf[a.postId], vb = votesOf[b.postId];
                if (va != vb) return va > vb;
                if (a.postId != b.postId) return a.postId < b.postId;
                return a.espName < b.espName;
              });
    saveIndex(dir, e.first, e.second);
  }
}

} // namespace refix
