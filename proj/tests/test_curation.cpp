#include "doctest.h"

#include "refix/curation.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace refix;
namespace fs = std::filesystem;

namespace {

std::string fixtures() { return REFIX_FIXTURES; }

std::string tempDir(const std::string &tag) {
  fs::path p = fs::temp_directory_path() / ("refix_curation_" + tag);
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Post makePost(const std::string &id, int votes, const std::string &code,
              const std::string &reType = "ClassCastException") {
  Post p;
  p.id = id;
  p.votes = votes;
  p.title = reType + " question " + id;
  p.tags = {"java"};
  p.questionBody = "Prose.\n```\n" + code + "```\n";
  p.reType = reType;
  Answer a;
  a.id = id + "9";
  a.votes = 1;
  a.body = "try this";
  p.answers.push_back(a);
  return p;
}

Esp makePattern(const std::string &text, const std::string &name,
                const std::string &reType = "ClassCastException") {
  std::vector<std::string> errs;
  Esp esp = parsePattern(text, name, errs);
  REQUIRE(errs.empty());
  esp.reType = reType;
  return esp;
}

} // namespace

TEST_CASE("the first parsable snippet wins") {
  std::string body = "```\n)))broken(((\n"
                     "at com.example.App.run(App.java:10)\n"
                     "at com.example.App.run(App.java:11)\n```\n"
                     "```\nint a = 1;\n```\n";
  std::optional<Apg> apg = firstParsableSnippet(body);
  REQUIRE(apg.has_value());
  CHECK(apg->liveCount() == 1);
  CHECK(!firstParsableSnippet("no code here").has_value());
}

TEST_CASE("suggestions rank by votes, unfamiliarity, then id") {
  std::vector<Post> posts;
  posts.push_back(makePost("300", 10, "a.add(b);\n"));
  posts.push_back(makePost("100", 50, "c.add(d);\n"));
  posts.push_back(makePost("200", 50, "e.add(f);\n"));

  // Highest votes first; the 50-50 tie falls to the smaller id when nothing
  // was visited yet (every distance is the same).
  const Post *first = suggestNextPost(posts, {});
  REQUIRE(first);
  CHECK(first->id == "100");

  // With equal votes, prefer the post least like the reviewed code.
  std::vector<Post> pool;
  pool.push_back(makePost("1", 9, "a.add(b);\n"));
  pool.push_back(makePost("2", 5, "c.add(d);\n"));
  pool.push_back(makePost("3", 5, "for (Order o : list) {\n    o.ship();\n}\n"));
  const Post *far = suggestNextPost(pool, {"1"});
  REQUIRE(far);
  CHECK(far->id == "3");

  CHECK(suggestNextPost(posts, {"100", "200", "300"}) == nullptr);
}

TEST_CASE("clustering collects only exact matches of the right type") {
  Esp esp = makePattern("$v1.flush();\n", "flusher");
  std::vector<Post> posts;
  posts.push_back(makePost("10", 5, "conn.flush();\n"));
  posts.push_back(makePost("11", 5, "out.flush();\n"));
  posts.push_back(makePost("12", 5, "conn.close();\n"));
  posts.push_back(makePost("13", 5, "conn.flush();\n", "NullPointerException"));
  CHECK(clusterPosts(esp, posts) == std::vector<std::string>{"10", "11"});
}

TEST_CASE("mining walks the queue and re-prompts on bad patterns") {
  PatternLibrary lib;
  lib.patterns.push_back(makePattern("$v1.flush();\n", "flusher"));

  std::vector<Post> posts;
  posts.push_back(makePost("100", 50, "conn.flush();\n")); // pre-clustered away
  posts.push_back(makePost("200", 40, "list.add(x);\n"));
  posts.push_back(makePost("300", 30, "map.put(k, v);\n"));

  std::vector<std::string> promptedIds;
  std::vector<std::vector<std::string>> promptedProblems;
  int call = 0;
  MiningResult r = runMiningSession(
      lib, posts, "ClassCastException", 3, [&](const MiningPrompt &prompt) {
        promptedIds.push_back(prompt.post->id);
        promptedProblems.push_back(prompt.problems);
        MiningVerdict v;
        switch (call++) {
        case 0:
          v.kind = MiningVerdict::ProvidePattern;
          v.patternName = "adder";
          v.patternText = "$v1.add((\n";
          break;
        case 1:
          v.kind = MiningVerdict::ProvidePattern;
          v.patternName = "flusher"; // taken
          v.patternText = "$v1.add($v2);\n";
          break;
        case 2:
          v.kind = MiningVerdict::ProvidePattern;
          v.patternName = "adder";
          v.patternText = "$v1.add($v2);\n";
          break;
        default:
          v.kind = MiningVerdict::Skip;
          break;
        }
        return v;
      });

  // The same post keeps coming back until its pattern is right.
  REQUIRE(promptedIds.size() == 4);
  CHECK(promptedIds[0] == "200");
  CHECK(promptedIds[1] == "200");
  CHECK(promptedIds[2] == "200");
  CHECK(promptedIds[3] == "300");
  CHECK(promptedProblems[0].empty());
  REQUIRE(!promptedProblems[1].empty());
  CHECK(promptedProblems[1][0].rfind("adder: ", 0) == 0);
  REQUIRE(!promptedProblems[2].empty());
  CHECK(promptedProblems[2][0] == "flusher: a pattern with this name already exists");

  CHECK(r.patternsAdded == 1);
  CHECK(r.postsVisited == 2); // the mined post and the final skip
  CHECK(r.exhausted == true);
  CHECK(findPattern(lib, "adder") != nullptr);
  CHECK(lib.visited.count("100")); // clustered before any prompt
  CHECK(lib.visited.count("200"));
  CHECK(lib.visited.count("300"));
}

TEST_CASE("mining stops after a run of unproductive posts") {
  PatternLibrary lib;
  std::vector<Post> posts;
  for (int i = 0; i < 5; ++i)
    posts.push_back(makePost(std::to_string(900 + i), 50 - i,
                             "v" + std::to_string(i) + ".call();\n"));
  int calls = 0;
  MiningResult r = runMiningSession(lib, posts, "ClassCastException", 3,
                                    [&](const MiningPrompt &) {
                                      ++calls;
                                      return MiningVerdict{MiningVerdict::Skip, "", ""};
                                    });
  CHECK(calls == 3);
  CHECK(r.postsVisited == 3);
  CHECK(r.patternsAdded == 0);
  CHECK(!r.exhausted);
}

TEST_CASE("mining can be stopped without consuming the post") {
  PatternLibrary lib;
  std::vector<Post> posts;
  posts.push_back(makePost("700", 5, "x.call();\n"));
  MiningResult r = runMiningSession(lib, posts, "ClassCastException", 3,
                                    [&](const MiningPrompt &) {
                                      return MiningVerdict{MiningVerdict::Stop, "", ""};
                                    });
  CHECK(r.postsVisited == 0);
  CHECK(!r.exhausted);
  CHECK(!lib.visited.count("700"));
}

TEST_CASE("prompts highlight what the library already explains") {
  PatternLibrary lib;
  lib.patterns.push_back(makePattern("$v1.flush();\n", "flusher"));
  std::vector<Post> posts;
  Post p = makePost("800", 5, "conn.flush(x);\nconn.append(y);\n");
  posts.push_back(p);

  std::vector<int> highlights;
  runMiningSession(lib, posts, "ClassCastException", 1,
                   [&](const MiningPrompt &prompt) {
                     highlights = prompt.highlightLines;
                     CHECK(prompt.snippet == "conn.flush(x);\nconn.append(y);");
                     return MiningVerdict{MiningVerdict::Skip, "", ""};
                   });
  CHECK(highlights == std::vector<int>{1});
}

TEST_CASE("the bundled corpus indexes to frozen scores") {
  std::string corpusDir = tempDir("index_corpus");
  ingestPosts(fixtures() + "/dumps/mini_posts.ndjson", corpusDir);
  std::vector<Post> posts = loadCorpus(corpusDir);
  PatternLibrary lib = loadLibrary(fixtures() + "/library");

  std::string indexDir = tempDir("index_out");
  buildIndex(lib, posts, indexDir);

  CHECK(slurp(indexDir + "/ClassCastException.tsv") ==
        "refix-index v1\n"
        "classcast_toarray\t46201465\t46201500\t0.750000\n"
        "classcast_toarray\t15264182\t15264238\t0.416667\n"
        "classcast_toarray\t23079003\t23079100\t0.416667\n"
        "classcast_toarray\t16656384\t16656400\t0.250000\n");
  CHECK(slurp(indexDir + "/ConcurrentModificationException.tsv") ==
        "refix-index v1\n"
        "cme_remove_in_loop\t11201197\t11201224\t0.691667\n");

  std::vector<IndexEntry> cce = loadIndex(indexDir, "ClassCastException");
  REQUIRE(cce.size() == 4);
  CHECK(cce[0].postId == "46201465");
  CHECK(cce[0].score == doctest::Approx(0.75));
  CHECK(cce[1].postId == "15264182");
  CHECK(cce[1].bestAnswerId == "15264238");
  CHECK(cce[3].score == doctest::Approx(0.25).epsilon(1e-5));

  fs::remove_all(corpusDir);
  fs::remove_all(indexDir);
}

TEST_CASE("posts without usable answers index at zero") {
  Esp esp = makePattern("$v1.flush();\n", "flusher");
  std::vector<Post> posts;
  posts.push_back(makePost("20", 5, "conn.flush();\n")); // prose-only answer
  std::vector<IndexEntry> entries = indexCluster(esp, posts);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].score == 0.0);
  CHECK(entries[0].bestAnswerId.empty());
}

TEST_CASE("index loading reports its failure modes") {
  CHECK_THROWS_WITH_AS(loadIndex("/nonexistent/refix", "ClassCastException"),
                       doctest::Contains("cannot open"), std::runtime_error);

  std::string dir = tempDir("badindex");
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/ClassCastException.tsv");
    out << "wrong header\n";
  }
  CHECK_THROWS_WITH_AS(loadIndex(dir, "ClassCastException"),
                       doctest::Contains("bad header"), std::runtime_error);
  {
    std::ofstream out(dir + "/ClassCastException.tsv");
    out << "refix-index v1\nonly\ttwo\tcells\n";
  }
  CHECK_THROWS_WITH_AS(loadIndex(dir, "ClassCastException"),
                       doctest::Contains("malformed row"), std::runtime_error);
  fs::remove_all(dir);
}
