#include "doctest.h"

#include "refix/repair.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace refix;
namespace fs = std::filesystem;

namespace {

std::string fixtures() { return REFIX_FIXTURES; }

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workspace {
  PatternLibrary lib;
  std::vector<Post> posts;
  std::vector<IndexEntry> cceIndex;
  std::vector<IndexEntry> cmeIndex;
};

const Workspace &workspace() {
  static Workspace ws = [] {
    Workspace w;
    fs::path corpusDir = fs::temp_directory_path() / "refix_repair_corpus";
    fs::path indexDir = fs::temp_directory_path() / "refix_repair_index";
    fs::remove_all(corpusDir);
    fs::remove_all(indexDir);
    ingestPosts(fixtures() + "/dumps/mini_posts.ndjson", corpusDir.string());
    w.lib = loadLibrary(fixtures() + "/library");
    w.posts = loadCorpus(corpusDir.string());
    buildIndex(w.lib, w.posts, indexDir.string());
    w.cceIndex = loadIndex(indexDir.string(), "ClassCastException");
    w.cmeIndex = loadIndex(indexDir.string(), "ConcurrentModificationException");
    fs::remove_all(corpusDir);
    fs::remove_all(indexDir);
    return w;
  }();
  return ws;
}

} // namespace

TEST_CASE("the buggy window is the enclosing method") {
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");
  SyntaxTree tree = parseUnit(makeSource(text, "ExtensionService.java"));
  REQUIRE(tree.errors.empty());

  int methodLine = -1;
  Apg window = extractBuggyWindow(tree, 40, &methodLine);
  CHECK(methodLine == 34);
  CHECK(outline(window) ==
        "root\n"
        "  varDecl line=35 [declaredType=ArrayList<URL>, varName=urls]\n"
        "    objectCreation line=35 [targetType=ArrayList<URL>, argCount=0]\n"
        "  loop line=36 [varName=extension, declaredType=Extension]\n"
        "    methodCall line=36 [calleeName=all, receiverName=registry, "
        "receiverType=ExtensionRegistry*, argCount=0]\n"
        "    methodCall line=37 [calleeName=add, receiverName=urls, "
        "receiverType=ArrayList*, argCount=1]\n"
        "      methodCall line=37 [calleeName=getURL, receiverName=extension, "
        "receiverType=Extension*, argCount=0]\n"
        "  varDecl line=40 [declaredType=URL[], varName=array]\n"
        "    classCast line=40 [targetType=URL[]]\n"
        "      methodCall line=40 [calleeName=toArray, receiverName=urls, "
        "receiverType=ArrayList*, argCount=0]\n"
        "  returnStmt line=41 [argSummary=array]\n");

  // A line outside every method falls back to the whole file.
  int outsideLine = -1;
  Apg whole = extractBuggyWindow(tree, 2, &outsideLine);
  CHECK(outsideLine == 0);
  CHECK(whole.liveCount() >= window.liveCount());
}

TEST_CASE("pattern selection respects threshold and coverage") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");
  SyntaxTree tree = parseUnit(makeSource(text, "ExtensionService.java"));
  Apg window = extractBuggyWindow(tree, 40);

  MatchResult match;
  const Esp *esp =
      findBestPattern(ws.lib, "ClassCastException", window, 40, 0.5, &match);
  REQUIRE(esp);
  CHECK(esp->name == "classcast_toarray");
  CHECK(match.score == doctest::Approx(1.0));
  CHECK(match.coversLine(window, 40));

  // An impossible threshold filters everything out.
  CHECK(findBestPattern(ws.lib, "ClassCastException", window, 40, 1.1) == nullptr);
  // The pattern does not cover unrelated lines.
  CHECK(findBestPattern(ws.lib, "ClassCastException", window, 36, 0.5) == nullptr);
  // Wrong exception type finds nothing.
  CHECK(findBestPattern(ws.lib, "NoSuchElementException", window, 40, 0.5) == nullptr);
}

TEST_CASE("the cast scenario is repaired from the corpus") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");

  FixResult r = fix(text, "ExtensionService.java", 40, "ClassCastException", ws.lib,
                    ws.posts, ws.cceIndex);
  CHECK(r.diagnostics.chosenPattern == "classcast_toarray");
  CHECK(r.diagnostics.patternScore == doctest::Approx(1.0));
  REQUIRE(r.patches.size() == 2);

  const PatchCandidate &top = r.patches[0];
  CHECK(top.postId == "15264182");
  CHECK(top.answerId == "15264238");
  CHECK(top.postScore == doctest::Approx(0.416667).epsilon(1e-5));
  CHECK(top.diff == "--- a/ExtensionService.java\n"
                    "+++ b/ExtensionService.java\n"
                    "@@ -37,7 +37,7 @@\n"
                    "             urls.add(extension.getURL());\n"
                    "         }\n"
                    " \n"
                    "-        URL[] array = (URL[]) urls.toArray();\n"
                    "+        URL[] array = urls.toArray(new URL[urls.size()]);\n"
                    "         return array;\n"
                    "     }\n"
                    " }\n");
  CHECK(top.patchedText.find("URL[] array = urls.toArray(new URL[urls.size()]);") !=
        std::string::npos);
  CHECK(top.patchedText.find("(URL[])") == std::string::npos);

  const PatchCandidate &second = r.patches[1];
  CHECK(second.postId == "16656384");
  CHECK(second.patchedText.find("URL[] array = urls.toArray(new URL[0]);") !=
        std::string::npos);

  // The identical-answer post derives nothing; the Integer variant collapses
  // into the first patch.
  CHECK(r.diagnostics.skippedEmptyScript >= 1);
  CHECK(r.diagnostics.skippedDuplicate >= 1);
  CHECK(r.fallbackPostId.empty());
}

TEST_CASE("the concurrent-removal scenario is repaired from the corpus") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/OrderProcessor.java");

  FixResult r = fix(text, "OrderProcessor.java", 6, "ConcurrentModificationException",
                    ws.lib, ws.posts, ws.cmeIndex);
  CHECK(r.diagnostics.chosenPattern == "cme_remove_in_loop");
  REQUIRE(r.patches.size() == 1);
  CHECK(r.patches[0].postId == "11201197");
  CHECK(r.patches[0].answerId == "11201224");
  CHECK(r.patches[0].diff ==
        "--- a/OrderProcessor.java\n"
        "+++ b/OrderProcessor.java\n"
        "@@ -2,8 +2,8 @@\n"
        "     private int processed = 0;\n"
        "     public void drain() {\n"
        "         ArrayList<Order> orders = new ArrayList<Order>();\n"
        "-        for (Order order : orders) {\n"
        "-            orders.remove(order);\n"
        "+        for (Order order : new ArrayList<Order>(orders)) {\n"
        "+            orders.remove();\n"
        "         }\n"
        "     }\n"
        " }\n");
}

TEST_CASE("an empty harvest falls back to the top-ranked post") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");

  std::vector<IndexEntry> only;
  for (const IndexEntry &e : ws.cceIndex)
    if (e.postId == "46201465") only.push_back(e);
  REQUIRE(only.size() == 1);

  FixResult r = fix(text, "ExtensionService.java", 40, "ClassCastException", ws.lib,
                    ws.posts, only);
  CHECK(r.patches.empty());
  CHECK(r.fallbackPostId == "46201465");
  CHECK(r.any());
}

TEST_CASE("result caps bound the work and the output") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");

  FixConfig one;
  one.k = 1;
  FixResult r1 = fix(text, "ExtensionService.java", 40, "ClassCastException", ws.lib,
                     ws.posts, ws.cceIndex, one);
  CHECK(r1.patches.size() == 1);
  CHECK(r1.patches[0].postId == "15264182");

  FixConfig narrow;
  narrow.z = 1;
  FixResult r2 = fix(text, "ExtensionService.java", 40, "ClassCastException", ws.lib,
                     ws.posts, ws.cceIndex, narrow);
  CHECK(r2.diagnostics.postsExamined == 1);
  // Only the perfect-score post is examined, and it contributes nothing.
  CHECK(r2.patches.empty());
  CHECK(r2.fallbackPostId == "46201465");
}

TEST_CASE("parallel and serial runs agree byte for byte") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");

  FixConfig serial;
  FixConfig parallel;
  parallel.parallel = true;
  FixResult a = fix(text, "ExtensionService.java", 40, "ClassCastException", ws.lib,
                    ws.posts, ws.cceIndex, serial);
  FixResult b = fix(text, "ExtensionService.java", 40, "ClassCastException", ws.lib,
                    ws.posts, ws.cceIndex, parallel);
  REQUIRE(a.patches.size() == b.patches.size());
  for (size_t i = 0; i < a.patches.size(); ++i) {
    CHECK(a.patches[i].postId == b.patches[i].postId);
    CHECK(a.patches[i].answerId == b.patches[i].answerId);
    CHECK(a.patches[i].diff == b.patches[i].diff);
    CHECK(a.patches[i].patchedText == b.patches[i].patchedText);
  }
}

TEST_CASE("no matching pattern means an empty result with a note") {
  const Workspace &ws = workspace();
  FixResult r = fix("int a = 1;\n", "Tiny.java", 1, "ClassCastException", ws.lib,
                    ws.posts, ws.cceIndex);
  CHECK(r.patches.empty());
  CHECK(r.fallbackPostId.empty());
  CHECK(!r.any());
  REQUIRE(!r.diagnostics.notes.empty());
  CHECK(r.diagnostics.notes[0] ==
        "no pattern of type ClassCastException matches the failing region");
}

TEST_CASE("syntax problems in the buggy file do not stop the fix") {
  const Workspace &ws = workspace();
  std::string text = slurp(fixtures() + "/buggy/ExtensionService.java");
  // Wound the file far from the failing method.
  size_t at = text.find("public void setVerbose");
  REQUIRE(at != std::string::npos);
  std::string wounded = text.substr(0, at) + "public broken(;\n" + text.substr(at);

  FixResult r = fix(wounded, "ExtensionService.java", 41, "ClassCastException",
                    ws.lib, ws.posts, ws.cceIndex);
  REQUIRE(!r.diagnostics.notes.empty());
  CHECK(r.diagnostics.notes[0].find("syntax problems") != std::string::npos);
}
