#include "doctest.h"

#include "refix/snippet_repair.hpp"

#include <string>

using namespace refix;

TEST_CASE("already-parsable text is left alone") {
  RepairOutcome r = repairSnippet("int a = 1;\nfoo(a);\n");
  CHECK(r.parsable);
  CHECK(!r.changed);
  CHECK(r.steps.empty());
  CHECK(r.repaired->text() == "int a = 1;\nfoo(a);\n");
  REQUIRE(r.errorCounts.size() == 1);
  CHECK(r.errorCounts[0] == 0);
}

TEST_CASE("missing semicolon is inserted") {
  RepairOutcome r = repairSnippet("int a = 1\nfoo(a);\n");
  CHECK(r.parsable);
  CHECK(r.changed);
  CHECK(r.repaired->text().find("int a = 1;") != std::string::npos);
}

TEST_CASE("try without catch gains a handler") {
  RepairOutcome r = repairSnippet("try {\n    risky();\n}\n");
  CHECK(r.parsable);
  CHECK(r.repaired->text().find("catch") != std::string::npos);
}

TEST_CASE("stray closing brace is dropped") {
  RepairOutcome r = repairSnippet("foo();\n}\nbar();\n");
  CHECK(r.parsable);
  CHECK(r.repaired->text().find('}') == std::string::npos);
}

TEST_CASE("ellipsis initializer becomes a type default") {
  RepairOutcome r = repairSnippet("List<String> x = ...;\nx.add(\"a\");\n");
  CHECK(r.parsable);
  CHECK(r.repaired->text().find("List<String> x = new ArrayList<>();") !=
        std::string::npos);
}

TEST_CASE("defaultInitializer table") {
  CHECK(defaultInitializer("int") == "0");
  CHECK(defaultInitializer("long") == "0");
  CHECK(defaultInitializer("double") == "0");
  CHECK(defaultInitializer("boolean") == "false");
  CHECK(defaultInitializer("String") == "\"\"");
  CHECK(defaultInitializer("int[]") == "new int[0]");
  CHECK(defaultInitializer("List<String>") == "new ArrayList<>()");
  CHECK(defaultInitializer("Set<Integer>") == "new HashSet<>()");
  CHECK(defaultInitializer("Map<String, Integer>") == "new HashMap<>()");
  CHECK(defaultInitializer("Widget") == "new Widget()");
}

TEST_CASE("error counts shrink every round") {
  RepairOutcome r = repairSnippet("int a = 1\nint b = 2\nfoo(\n");
  REQUIRE(r.errorCounts.size() >= 2);
  for (size_t i = 1; i < r.errorCounts.size(); ++i)
    CHECK(r.errorCounts[i] < r.errorCounts[i - 1]);
  if (r.parsable) CHECK(r.errorCounts.back() == 0);
}

TEST_CASE("prose-heavy text is abandoned, not looped forever") {
  std::string prose;
  for (int i = 0; i < 80; ++i)
    prose += "at com.example.app.Layer" + std::to_string(i) +
             ".invoke(Layer" + std::to_string(i) + ".java:" +
             std::to_string(10 + i) + ")\n";
  RepairOutcome r = repairSnippet(prose);
  CHECK(!r.parsable);
  // Every recorded round still made progress before the loop gave up.
  for (size_t i = 1; i < r.errorCounts.size(); ++i)
    CHECK(r.errorCounts[i] < r.errorCounts[i - 1]);
}

TEST_CASE("steps narrate what changed") {
  RepairOutcome r = repairSnippet("int a = 1\n");
  REQUIRE(r.parsable);
  REQUIRE(!r.steps.empty());
  CHECK(r.steps.front().line == 1);
  CHECK(r.steps.front().inserted == ";");
}
