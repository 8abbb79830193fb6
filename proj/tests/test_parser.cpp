#include "doctest.h"

#include "refix/parser.hpp"

using namespace refix;

namespace {

SyntaxTree parse(const std::string &s, ParseOptions opts = {}) {
  return parseUnit(makeSource(s), opts);
}

int countKind(const SyntaxTree &t, AstKind k) {
  int n = 0;
  for (const auto &node : t.nodes)
    if (node.kind == k) ++n;
  return n;
}

int firstOfKind(const SyntaxTree &t, AstKind k) {
  for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i)
    if (t.nodes[i].kind == k) return i;
  return -1;
}

} // namespace

TEST_CASE("statement fragments parse without a class wrapper") {
  SyntaxTree t = parse("int a = 1;\na = a + 2;\nfoo.bar(a);\n");
  CHECK(t.errors.empty());
  CHECK(countKind(t, AstKind::LocalDecl) == 1);
  CHECK(countKind(t, AstKind::AssignStmt) == 1);
  CHECK(countKind(t, AstKind::CallExpr) == 1);
}

TEST_CASE("full compilation units parse") {
  SyntaxTree t = parse(
      "package demo.app;\n"
      "import java.util.List;\n"
      "public class Box {\n"
      "    private int n = 0;\n"
      "    public int get() {\n"
      "        return n;\n"
      "    }\n"
      "}\n");
  CHECK(t.errors.empty());
  CHECK(countKind(t, AstKind::ClassDecl) == 1);
  CHECK(countKind(t, AstKind::MethodDecl) == 1);
  CHECK(countKind(t, AstKind::FieldDecl) == 1);
}

TEST_CASE("statement variety") {
  SyntaxTree t = parse(
      "for (String s : names) {\n"
      "    if (s.isEmpty()) {\n"
      "        continue;\n"
      "    }\n"
      "}\n"
      "for (int i = 0; i < 3; i++) {\n"
      "    total = total + i;\n"
      "}\n"
      "while (queue.hasNext()) {\n"
      "    queue.next();\n"
      "}\n"
      "try {\n"
      "    risky();\n"
      "} catch (Exception e) {\n"
      "    throw new IllegalStateException(\"bad\");\n"
      "} finally {\n"
      "    close();\n"
      "}\n");
  CHECK(t.errors.empty());
  CHECK(countKind(t, AstKind::ForEachStmt) == 1);
  CHECK(countKind(t, AstKind::ForStmt) == 1);
  CHECK(countKind(t, AstKind::WhileStmt) == 1);
  CHECK(countKind(t, AstKind::TryStmt) == 1);
  CHECK(countKind(t, AstKind::CatchClause) == 1);
  CHECK(countKind(t, AstKind::FinallyClause) == 1);
  CHECK(countKind(t, AstKind::ThrowStmt) == 1);
}

TEST_CASE("expression shapes") {
  SyntaxTree t = parse("String[] a = (String[]) xs.toArray();\n"
                       "int v = grid[i][j] + 1;\n"
                       "List<String> ys = new ArrayList<String>(xs);\n"
                       "int[] zs = new int[4];\n");
  CHECK(t.errors.empty());
  CHECK(countKind(t, AstKind::CastExpr) == 1);
  CHECK(countKind(t, AstKind::IndexExpr) == 2);
  CHECK(countKind(t, AstKind::NewObjectExpr) == 1);
  CHECK(countKind(t, AstKind::NewArrayExpr) == 1);
  int cast = firstOfKind(t, AstKind::CastExpr);
  CHECK(t.node(cast).text == "String[]");
}

TEST_CASE("call receiver chains keep callee and receiver apart") {
  SyntaxTree t = parse("resp.body().close();\n");
  REQUIRE(t.errors.empty());
  int outer = -1;
  for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i)
    if (t.nodes[i].kind == AstKind::CallExpr && t.nodes[i].text == "close") outer = i;
  REQUIRE(outer >= 0);
  CHECK(t.node(outer).flag); // has receiver
  int recv = t.node(outer).children[0];
  CHECK(t.node(recv).kind == AstKind::CallExpr);
  CHECK(t.node(recv).text == "body");
}

TEST_CASE("missing semicolon is a missing-symbol error") {
  SyntaxTree t = parse("int a = 1\nint b = 2;\n");
  REQUIRE(!t.errors.empty());
  const ParseError &e = t.errors.front();
  CHECK(e.category == ErrorCategory::MissingToken);
  CHECK(e.expectKind == ExpectKind::Symbol);
  CHECK(e.expected == ";");
  CHECK(e.line == 1);
}

TEST_CASE("try without handler asks for catch-or-finally") {
  SyntaxTree t = parse("try {\n    risky();\n}\n");
  REQUIRE(!t.errors.empty());
  const ParseError &e = t.errors.front();
  CHECK(e.category == ErrorCategory::MissingToken);
  CHECK(e.expectKind == ExpectKind::Rule);
  CHECK(e.expected == "catch-or-finally");
}

TEST_CASE("ellipsis initializer reports the declared type") {
  SyntaxTree t = parse("List<String> x = ...;\n");
  REQUIRE(!t.errors.empty());
  const ParseError &e = t.errors.front();
  CHECK(e.category == ErrorCategory::InvalidToken);
  CHECK(e.expected == "expression");
  CHECK(e.typeHint == "List<String>");
}

TEST_CASE("stray closing brace is an extra token") {
  SyntaxTree t = parse("foo();\n}\n");
  REQUIRE(!t.errors.empty());
  CHECK(t.errors.front().category == ErrorCategory::ExtraToken);
  CHECK(t.errors.front().tokenText == "}");
}

TEST_CASE("errors arrive ordered by offset") {
  SyntaxTree t = parse("int a = \nfoo(\n");
  REQUIRE(t.errors.size() >= 2);
  for (size_t i = 1; i < t.errors.size(); ++i)
    CHECK(t.errors[i - 1].offset <= t.errors[i].offset);
}

TEST_CASE("the parser always finishes") {
  // Pathological inputs still produce a tree and sorted errors.
  for (const char *bad : {"((((((((", "}}}}{{{{", "new new new", "for for for",
                          "\"unterminated", "a.b.c.d.e(((,,,)))"}) {
    SyntaxTree t = parse(bad);
    CHECK(t.root >= 0);
    CHECK(!t.errors.empty());
  }
}

TEST_CASE("annotations are rejected unless enabled") {
  std::string text = "@Abstract(_ABSTRACT_1 = List | Set)\nint a = 1;\n";
  SyntaxTree off = parse(text);
  CHECK(!off.errors.empty());

  ParseOptions opts;
  opts.allowAnnotations = true;
  SyntaxTree on = parse(text, opts);
  CHECK(on.errors.empty());
  int ann = firstOfKind(on, AstKind::Annotation);
  REQUIRE(ann >= 0);
  CHECK(on.node(ann).text.substr(0, 8) == "Abstract");
}

TEST_CASE("node text collapses whitespace") {
  SyntaxTree t = parse("foo( a,\n     b );\n");
  REQUIRE(t.errors.empty());
  int call = firstOfKind(t, AstKind::CallExpr);
  CHECK(t.nodeText(call) == "foo( a, b )");
  CHECK(collapseWs("  x \t y\n z ") == "x y z");
}

TEST_CASE("import and package lines never produce code nodes") {
  SyntaxTree t = parse("import java.util.*;\nimport static java.lang.Math.max;\nfoo();\n");
  CHECK(t.errors.empty());
  CHECK(countKind(t, AstKind::CallExpr) == 1);
}
