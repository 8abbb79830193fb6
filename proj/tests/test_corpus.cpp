#include "doctest.h"

#include "refix/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

using namespace refix;
namespace fs = std::filesystem;

namespace {

std::string fixtures() { return REFIX_FIXTURES; }

std::string tempDir(const std::string &tag) {
  fs::path p = fs::temp_directory_path() / ("refix_corpus_" + tag);
  fs::remove_all(p);
  return p.string();
}

const Post *findPost(const std::vector<Post> &posts, const std::string &id) {
  for (const Post &p : posts)
    if (p.id == id) return &p;
  return nullptr;
}

} // namespace

TEST_CASE("exception detection picks the earliest whole-word hit") {
  const auto &types = defaultExceptionTypes();
  CHECK(detectExceptionType("Why does this throw ClassCastException?", types) ==
        "ClassCastException");
  CHECK(detectExceptionType(
            "NullPointerException then ClassCastException in one run", types) ==
        "NullPointerException");
  CHECK(detectExceptionType("ClassCastException vs NullPointerException", types) ==
        "ClassCastException");
  // Substrings inside larger words do not count.
  CHECK(detectExceptionType("MyClassCastExceptionHelper is broken", types) == "");
  CHECK(detectExceptionType("java.lang.ClassCastException: [Ljava.lang.Object;",
                            types) == "ClassCastException");
  CHECK(detectExceptionType("why is my list broken", types) == "");
  CHECK(detectExceptionType("classcastexception lowercase", types) == "");
  CHECK(detectExceptionType("", types) == "");
}

TEST_CASE("snippet extraction handles fences and pre/code blocks") {
  std::string body =
      "Intro prose.\n"
      "```java\n"
      "int a = 1;\n"
      "```\n"
      "More prose with `inline` code.\n"
      "<pre><code>List&lt;String&gt; xs = a.get(&quot;k&quot;);\n"
      "if (a &amp;&amp; b) { f(&#39;c&#39;); }\n"
      "</code></pre>\n"
      "```\n"
      "second.fence();\n"
      "```\n";
  std::vector<std::string> snippets = extractSnippets(body);
  REQUIRE(snippets.size() == 3);
  CHECK(snippets[0] == "int a = 1;");
  CHECK(snippets[1] == "second.fence();");
  CHECK(snippets[2] == "List<String> xs = a.get(\"k\");\n"
                       "if (a && b) { f('c'); }");
}

TEST_CASE("snippet extraction ignores unclosed or empty blocks") {
  CHECK(extractSnippets("```java\nnever closed\n").empty());
  CHECK(extractSnippets("```\n\n```\n").empty());
  CHECK(extractSnippets("<pre><code></code></pre>").empty());
  CHECK(extractSnippets("no code at all").empty());
  std::vector<std::string> one = extractSnippets("<pre class=\"lang-java\"><code>x();</code></pre>");
  REQUIRE(one.size() == 1);
  CHECK(one[0] == "x();");
}

TEST_CASE("ingest filters the bundled dump to the expected corpus") {
  std::string out = tempDir("ingest");
  CorpusStats st = ingestPosts(fixtures() + "/dumps/mini_posts.ndjson", out);
  CHECK(st.totalPosts == 9);
  CHECK(st.acceptedPosts == 5);
  CHECK(st.totalSnippets == 8);
  CHECK(st.readilyParsable == 6);
  CHECK(st.repairedParsable == 2);

  std::vector<Post> posts = loadCorpus(out);
  REQUIRE(posts.size() == 5);
  CHECK(findPost(posts, "15264182"));
  CHECK(findPost(posts, "16656384"));
  CHECK(findPost(posts, "46201465"));
  CHECK(findPost(posts, "23079003"));
  CHECK(findPost(posts, "11201197"));
  // Rejected: no answers, no exception in the title, wrong tags, no code.
  CHECK(!findPost(posts, "4450087"));
  CHECK(!findPost(posts, "7419299"));
  CHECK(!findPost(posts, "9997137"));
  CHECK(!findPost(posts, "30831733"));

  const Post *cce = findPost(posts, "15264182");
  CHECK(cce->reType == "ClassCastException");
  CHECK(cce->votes == 55);
  CHECK(cce->acceptedAnswerId == "15264238");
  REQUIRE(cce->answers.size() == 2);
  CHECK(cce->answers[0].id == "15264238");
  CHECK(cce->answers[0].votes == 40);
  CHECK(std::count(cce->tags.begin(), cce->tags.end(), "java") == 1);

  const Post *cme = findPost(posts, "11201197");
  CHECK(cme->reType == "ConcurrentModificationException");
  fs::remove_all(out);
}

TEST_CASE("a corpus survives the disk round-trip") {
  std::string dir = tempDir("roundtrip");
  Post p;
  p.id = "77";
  p.title = "ClassCastException on toArray";
  p.tags = {"java", "arrays"};
  p.votes = 9;
  p.questionBody = "body with\nnewlines and \"quotes\"";
  p.acceptedAnswerId = "78";
  p.reType = "ClassCastException";
  Answer a;
  a.id = "78";
  a.votes = 4;
  a.body = "use toArray(new T[0])";
  p.answers.push_back(a);

  CorpusStats st;
  st.totalPosts = 1;
  st.acceptedPosts = 1;
  saveCorpus(dir, {p}, st);
  std::vector<Post> back = loadCorpus(dir);
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == "77");
  CHECK(back[0].title == p.title);
  CHECK(back[0].tags == p.tags);
  CHECK(back[0].votes == 9);
  CHECK(back[0].questionBody == p.questionBody);
  CHECK(back[0].acceptedAnswerId == "78");
  CHECK(back[0].reType == "ClassCastException");
  REQUIRE(back[0].answers.size() == 1);
  CHECK(back[0].answers[0].body == a.body);
  fs::remove_all(dir);
}

TEST_CASE("corpus loading distinguishes its failure modes") {
  CHECK_THROWS_WITH_AS(loadCorpus("/nonexistent/refix/corpus"),
                       doctest::Contains("cannot open"), std::runtime_error);

  std::string dir = tempDir("badload");
  fs::create_directories(dir);
  auto write = [&](const std::string &content) {
    std::ofstream out(dir + "/posts.ndjson");
    out << content;
  };

  write("");
  CHECK_THROWS_WITH_AS(loadCorpus(dir), doctest::Contains("empty file"),
                       std::runtime_error);

  write("{\"something\":1}\n");
  CHECK_THROWS_WITH_AS(loadCorpus(dir), doctest::Contains("missing version header"),
                       std::runtime_error);

  write("{\"refix_corpus\":99}\n{\"record_count\":0}\n");
  CHECK_THROWS_WITH_AS(loadCorpus(dir), doctest::Contains("unsupported version"),
                       std::runtime_error);

  write("{\"refix_corpus\":1}\nnot json\n{\"record_count\":1}\n");
  CHECK_THROWS_WITH_AS(loadCorpus(dir), doctest::Contains("malformed record"),
                       std::runtime_error);

  write("{\"refix_corpus\":1}\n{\"id\":\"1\"}\n{\"record_count\":2}\n");
  CHECK_THROWS_WITH_AS(loadCorpus(dir),
                       doctest::Contains("footer says 2 records, found 1"),
                       std::runtime_error);

  write("{\"refix_corpus\":1}\n{\"id\":\"1\"}\n");
  CHECK_THROWS_WITH_AS(loadCorpus(dir),
                       doctest::Contains("record-count footer missing"),
                       std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("ingest rejects dumps it cannot read") {
  CHECK_THROWS_WITH_AS(ingestPosts("/nonexistent/dump.ndjson", tempDir("nowhere")),
                       doctest::Contains("cannot open"), std::runtime_error);
}
