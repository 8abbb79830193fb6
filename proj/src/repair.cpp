#include "refix/repair.hpp"

#include "refix/edit_script.hpp"
#include "refix/patch.hpp"
#include "refix/snippet_repair.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

namespace refix {

Apg extractBuggyWindow(const SyntaxTree &tree, int failLine, int *methodLine) {
  int best = -1;
  int bestSize = 1 << 30;
  for (int id = 0; id < static_cast<int>(tree.nodes.size()); ++id) {
    const AstNode &n = tree.nodes[id];
    if (n.kind != AstKind::MethodDecl) continue;
    Span s = tree.nodeSpan(id);
    if (!s.valid()) continue;
    int first = tree.src->lineOf(s.begin);
    int last = tree.src->lineOf(std::max(s.begin, s.end - 1));
    if (failLine < first || failLine > last) continue;
    int size = last - first;
    if (size < bestSize) {
      best = id;
      bestSize = size;
    }
  }
  if (best < 0) {
    if (methodLine) *methodLine = 0;
    return buildApg(tree);
  }
  if (methodLine) *methodLine = tree.nodeLine(best);
  return buildApgFromMethod(tree, best);
}

const Esp *findBestPattern(const PatternLibrary &lib, const std::string &reType,
                           const Apg &window, int failLine, double tau,
                           MatchResult *match) {
  const Esp *best = nullptr;
  MatchResult bestMatch;
  for (const Esp &esp : lib.patterns) {
    if (esp.reType != reType) continue;
    MatchResult m = matchPattern(esp, window);
    if (m.score < tau) continue;
    if (!m.coversLine(window, failLine)) continue;
    bool better = false;
    if (!best) {
      better = true;
    } else if (m.score > bestMatch.score + 1e-12) {
      better = true;
    } else if (std::abs(m.score - bestMatch.score) <= 1e-12) {
      int na = esp.apg.liveCount(), nb = best->apg.liveCount();
      if (na > nb) better = true;
      else if (na == nb && esp.name < best->name) better = true;
    }
    if (better) {
      best = &esp;
      bestMatch = std::move(m);
    }
  }
  if (best && match) *match = bestMatch;
  return best;
}

namespace {

struct PairOutcome {
  std::vector<PatchCandidate> kept; // in discovery order, pre-dedup
  FixDiagnostics diag;              // per-post counters to merge
};

struct SnippetApg {
  Apg apg;
  std::string text;
};

std::vector<SnippetApg> parsableSnippets(const std::string &body) {
  std::vector<SnippetApg> out;
  for (const std::string &code : extractSnippets(body)) {
    RepairOutcome r = repairSnippet(code);
    if (!r.parsable) continue;
    Apg apg = buildApg(r.tree);
    if (apg.liveCount() == 0) continue;
    out.push_back({std::move(apg), r.repaired->text()});
  }
  return out;
}

std::vector<const Answer *> rankedAnswers(const Post &post) {
  std::vector<const Answer *> out;
  for (const Answer &a : post.answers) out.push_back(&a);
  std::stable_sort(out.begin(), out.end(), [&](const Answer *a, const Answer *b) {
    bool aAcc = a->id == post.acceptedAnswerId && !post.acceptedAnswerId.empty();
    bool bAcc = b->id == post.acceptedAnswerId && !post.acceptedAnswerId.empty();
    if (aAcc != bAcc) return aAcc;
    if (a->votes != b->votes) return a->votes > b->votes;
    return a->id < b->id;
  });
  return out;
}

PairOutcome processPost(const Post &post, double postScore, const Esp &esp,
                        const Apg &window, int pairCap) {
  PairOutcome out;
  std::vector<SnippetApg> questions = parsableSnippets(post.questionBody);
  if (questions.empty()) return out;

  int pairs = 0;
  for (const Answer *ans : rankedAnswers(post)) {
    std::vector<SnippetApg> answers = parsableSnippets(ans->body);
    for (const SnippetApg &aSnip : answers) {
      for (const SnippetApg &qSnip : questions) {
        if (pairs >= pairCap) return out;
        ++pairs;
        ++out.diag.pairsTried;

        TriangulationResult tri =
            triangulate(qSnip.apg, aSnip.apg, esp.apg, &esp.defs);
        if (tri.quesRelevantLines.empty()) {
          ++out.diag.skippedNoOverlap;
          continue;
        }
        Apg qp = pruneApg(qSnip.apg, tri.quesRelevantLines);
        Apg ap = pruneApg(aSnip.apg, tri.ansRelevantLines);
        if (qp.liveCount() == 0 || ap.liveCount() == 0) {
          ++out.diag.skippedNoOverlap;
          continue;
        }

        EditScript derived = deriveEditScript(qp, ap);
        if (derived.empty()) {
          ++out.diag.skippedEmptyScript;
          continue;
        }
        EditScript toPattern = adaptEditScript(derived, qp, esp.apg, &esp.defs);
        out.diag.opsDropped +=
            static_cast<int>(derived.ops.size() - toPattern.ops.size());
        if (toPattern.empty()) {
          ++out.diag.skippedEmptyScript;
          continue;
        }
        EditScript toBuggy = adaptEditScript(toPattern, esp.apg, window, &esp.defs);
        out.diag.opsDropped +=
            static_cast<int>(toPattern.ops.size() - toBuggy.ops.size());
        if (toBuggy.empty()) {
          ++out.diag.skippedEmptyScript;
          continue;
        }

        Apg patched;
        try {
          patched = applyScript(window, toBuggy);
        } catch (const ApplyError &e) {
          ++out.diag.skippedApplyError;
          out.diag.notes.push_back("post " + post.id + ": " + e.what());
          continue;
        }
        std::string why;
        if (!isValidApg(patched, &why)) {
          ++out.diag.skippedInvalidApg;
          continue;
        }
        RenderedPatch rendered = renderPatch(window, patched);
        if (rendered.emptyDiff) {
          ++out.diag.skippedEmptyDiff;
          continue;
        }
        if (!rendered.parses) {
          ++out.diag.skippedUnparsable;
          continue;
        }

        PatchCandidate c;
        c.postId = post.id;
        c.answerId = ans->id;
        c.questionSnippet = qSnip.text;
        c.diff = rendered.diffText;
        c.patchedText = rendered.patchedText;
        c.postScore = postScore;
        out.kept.push_back(std::move(c));
      }
    }
  }
  return out;
}

void mergeDiag(FixDiagnostics &into, const FixDiagnostics &from) {
  into.pairsTried += from.pairsTried;
  into.skippedNoOverlap += from.skippedNoOverlap;
  into.skippedEmptyScript += from.skippedEmptyScript;
  into.skippedApplyError += from.skippedApplyError;
  into.skippedInvalidApg += from.skippedInvalidApg;
  into.skippedUnparsable += from.skippedUnparsable;
  into.skippedEmptyDiff += from.skippedEmptyDiff;
  into.skippedDuplicate += from.skippedDuplicate;
  into.opsDropped += from.opsDropped;
  into.notes.insert(into.notes.end(), from.notes.begin(), from.notes.end());
}

} // namespace

FixResult fix(const std::string &fileText, const std::string &fileName, int failLine,
              const std::string &reType, const PatternLibrary &lib,
              const std::vector<Post> &posts, const std::vector<IndexEntry> &index,
              const FixConfig &cfg) {
  FixResult result;
  SyntaxTree tree = parseUnit(makeSource(fileText, fileName));
  if (!tree.errors.empty())
    result.diagnostics.notes.push_back("buggy file has " +
                                       std::to_string(tree.errors.size()) +
                                       " syntax problems; proceeding on recovery");
  Apg window = extractBuggyWindow(tree, failLine);

  MatchResult match;
  const Esp *esp = findBestPattern(lib, reType, window, failLine, cfg.tau, &match);
  if (!esp) {
    result.diagnostics.notes.push_back("no pattern of type " + reType +
                                       " matches the failing region");
    return result;
  }
  result.diagnostics.chosenPattern = esp->name;
  result.diagnostics.patternScore = match.score;

  std::map<std::string, const Post *> byId;
  for (const Post &p : posts) byId[p.id] = &p;

  struct Ranked {
    const Post *post;
    double score;
  };
  std::vector<Ranked> ranked;
  for (const IndexEntry &e : index) {
    if (e.espName != esp->name) continue;
    auto it = byId.find(e.postId);
    if (it == byId.end()) continue;
    ranked.push_back({it->second, e.score});
    if (static_cast<int>(ranked.size()) >= cfg.z) break;
  }
  result.diagnostics.postsExamined = static_cast<int>(ranked.size());

  const int pairCap = 6;
  std::vector<PairOutcome> outcomes(ranked.size());
  if (cfg.parallel && ranked.size() > 1) {
    std::vector<std::future<PairOutcome>> futures;
    futures.reserve(ranked.size());
    for (const Ranked &r : ranked)
      futures.push_back(std::async(std::launch::async, [&, r]() {
        return processPost(*r.post, r.score, *esp, window, pairCap);
      }));
    for (size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < ranked.size(); ++i) {
      if (static_cast<int>(result.patches.size()) >= cfg.k) break;
      outcomes[i] = processPost(*ranked[i].post, ranked[i].score, *esp, window, pairCap);
      mergeDiag(result.diagnostics, outcomes[i].diag);
      for (PatchCandidate &c : outcomes[i].kept) {
        if (static_cast<int>(result.patches.size()) >= cfg.k) break;
        bool dup = false;
        for (const PatchCandidate &have : result.patches)
          if (have.diff == c.diff) dup = true;
        if (dup) {
          ++result.diagnostics.skippedDuplicate;
          continue;
        }
        result.patches.push_back(std::move(c));
      }
      outcomes[i].diag = {};
      outcomes[i].kept.clear();
    }
  }
  if (cfg.parallel && ranked.size() > 1) {
    for (PairOutcome &o : outcomes) {
      mergeDiag(result.diagnostics, o.diag);
      for (PatchCandidate &c : o.kept) {
        if (static_cast<int>(result.patches.size()) >= cfg.k) break;
        bool dup = false;
        for (const PatchCandidate &have : result.patches)
          if (have.diff == c.diff) dup = true;
        if (dup) {
          ++result.diagnostics.skippedDuplicate;
          continue;
        }
        result.patches.push_back(std::move(c));
      }
    }
  }

  if (result.patches.empty() && !ranked.empty())
    result.fallbackPostId = ranked.front().post->id;
  return result;
}

} // namespace refix
