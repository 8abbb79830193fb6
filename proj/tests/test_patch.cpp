#include "doctest.h"

#include "refix/edit_script.hpp"
#include "refix/patch.hpp"
#include "refix/snippet_repair.hpp"

#include <string>

using namespace refix;

namespace {

Apg build(const std::string &text) {
  RepairOutcome r = repairSnippet(text);
  REQUIRE(r.parsable);
  return buildApg(r.tree);
}

RenderedPatch roundTrip(const std::string &from, const std::string &to) {
  Apg x = build(from);
  Apg y = build(to);
  EditScript s = deriveEditScript(x, y);
  return renderPatch(x, applyScript(x, s));
}

} // namespace

TEST_CASE("component updates rewrite in place") {
  RenderedPatch p = roundTrip("urls.add(first);\n", "urls.add(second);\n");
  CHECK(p.parses);
  CHECK(p.patchedText == "urls.add(second);\n");
  CHECK(p.diffText == "--- a/snippet\n"
                      "+++ b/snippet\n"
                      "@@ -1 +1 @@\n"
                      "-urls.add(first);\n"
                      "+urls.add(second);\n");
}

TEST_CASE("whole statements vanish with their line") {
  RenderedPatch p = roundTrip("urls.add(first);\nurls.clear();\n", "urls.add(first);\n");
  CHECK(p.parses);
  CHECK(p.patchedText == "urls.add(first);\n");
}

TEST_CASE("new statements are inserted with the body indent") {
  RenderedPatch p = roundTrip("for (String s : names) {\n    use(s);\n}\n",
                              "for (String s : names) {\n    use(s);\n    log(s);\n}\n");
  CHECK(p.parses);
  CHECK(p.patchedText ==
        "for (String s : names) {\n    use(s);\n    log(s);\n}\n");
}

TEST_CASE("appended arguments get a separator") {
  RenderedPatch p = roundTrip("foo(a);\n", "foo(a, b);\n");
  CHECK(p.parses);
  CHECK(p.patchedText == "foo(a, b);\n");
}

TEST_CASE("removed arguments take a separator with them") {
  RenderedPatch two = roundTrip("foo(a, b);\n", "foo(a);\n");
  CHECK(two.parses);
  CHECK(two.patchedText == "foo(a);\n");

  // Same when the dead argument is a structural subtree, not a summary.
  RenderedPatch call = roundTrip("foo(bar(x), y);\n", "foo(y);\n");
  CHECK(call.parses);
  CHECK(call.patchedText == "foo(y);\n");
}

TEST_CASE("declaring an assigned variable splices the type in") {
  RenderedPatch p = roundTrip("x = compute();\n", "Result x = compute();\n");
  CHECK(p.parses);
  CHECK(p.patchedText == "Result x = compute();\n");
}

TEST_CASE("iterator expressions can be wrapped in a copy") {
  RenderedPatch p = roundTrip(
      "for (Order o : orders) {\n    o.ship();\n}\n",
      "for (Order o : new ArrayList<Order>(orders)) {\n    o.ship();\n}\n");
  CHECK(p.parses);
  CHECK(p.patchedText ==
        "for (Order o : new ArrayList<Order>(orders)) {\n    o.ship();\n}\n");
}

TEST_CASE("cast-to-call replacement lands on the cast's extent") {
  RenderedPatch p = roundTrip(
      "ArrayList<String> urls = new ArrayList<String>();\n"
      "String[] a = (String[]) urls.toArray();\n",
      "ArrayList<String> urls = new ArrayList<String>();\n"
      "String[] a = urls.toArray(new String[urls.size()]);\n");
  CHECK(p.parses);
  CHECK(p.patchedText ==
        "ArrayList<String> urls = new ArrayList<String>();\n"
        "String[] a = urls.toArray(new String[urls.size()]);\n");
}

TEST_CASE("no-op scripts yield an empty diff") {
  Apg x = build("urls.add(first);\n");
  RenderedPatch p = renderPatch(x, applyScript(x, EditScript{}));
  CHECK(p.parses);
  CHECK(p.emptyDiff);
  CHECK(p.diffText.empty());
  CHECK(p.patchedText == "urls.add(first);\n");
}

TEST_CASE("unparsable render results are flagged") {
  Apg x = build("urls.add(first);\n");
  EditScript s;
  EditOperation op;
  op.type = EditOpType::Update;
  op.anchor = {false, 1};
  PayloadNode payload;
  payload.kind = ApgKind::MethodCall;
  payload.components.emplace_back(Role::CalleeName, "add((");
  payload.components.emplace_back(Role::ReceiverName, "urls");
  payload.components.emplace_back(Role::ArgCount, "1");
  payload.components.emplace_back(Role::ArgSummary, "first");
  op.payload = payload;
  s.ops.push_back(op);
  RenderedPatch p = renderPatch(x, applyScript(x, s));
  CHECK(!p.parses);
}

TEST_CASE("nearby changes share a hunk, distant ones split") {
  std::string near = unifiedDiff("a();\nb();\nc();\nd();\ne();\n",
                                 "a(x);\nb();\nc();\nd();\ne(y);\n", "t.java");
  CHECK(near == "--- a/t.java\n"
                "+++ b/t.java\n"
                "@@ -1,5 +1,5 @@\n"
                "-a();\n"
                "+a(x);\n"
                " b();\n"
                " c();\n"
                " d();\n"
                "-e();\n"
                "+e(y);\n");

  std::string far =
      unifiedDiff("a();\nk1();\nk2();\nk3();\nk4();\nk5();\nk6();\nk7();\nz();\n",
                  "a(x);\nk1();\nk2();\nk3();\nk4();\nk5();\nk6();\nk7();\nz(y);\n",
                  "t.java");
  CHECK(far == "--- a/t.java\n"
               "+++ b/t.java\n"
               "@@ -1,4 +1,4 @@\n"
               "-a();\n"
               "+a(x);\n"
               " k1();\n"
               " k2();\n"
               " k3();\n"
               "@@ -6,4 +6,4 @@\n"
               " k5();\n"
               " k6();\n"
               " k7();\n"
               "-z();\n"
               "+z(y);\n");
}

TEST_CASE("identical inputs diff to nothing") {
  CHECK(unifiedDiff("a();\n", "a();\n", "t.java").empty());
}
