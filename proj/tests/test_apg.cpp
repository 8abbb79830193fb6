#include "doctest.h"

#include "refix/apg.hpp"

#include <string>

using namespace refix;

namespace {

Apg build(const std::string &text) {
  SyntaxTree t = parseUnit(makeSource(text));
  REQUIRE(t.errors.empty());
  return buildApg(t);
}

const char *kQuestion =
    "ArrayList<String> image_urls = new ArrayList<String>();\n"
    "image_urls.add(\"some url\");\n"
    "String[] arrayOfUrls = (String[]) image_urls.toArray();\n";

} // namespace

TEST_CASE("question snippet graph shape") {
  Apg a = build(kQuestion);
  CHECK(outline(a) ==
        "root\n"
        "  varDecl line=1 [declaredType=ArrayList<String>, varName=image_urls]\n"
        "    objectCreation line=1 [targetType=ArrayList<String>, argCount=0]\n"
        "  methodCall line=2 [calleeName=add, receiverName=image_urls, "
        "receiverType=ArrayList*, argCount=1, argSummary=\"some url\"]\n"
        "  varDecl line=3 [declaredType=String[], varName=arrayOfUrls]\n"
        "    classCast line=3 [targetType=String[]]\n"
        "      methodCall line=3 [calleeName=toArray, receiverName=image_urls, "
        "receiverType=ArrayList*, argCount=0]\n");
  CHECK(a.liveCount() == 6);
  CHECK(isValidApg(a));
}

TEST_CASE("receiver types are inferred from declarations") {
  Apg a = build(kQuestion);
  const ApgNode *call = nullptr;
  for (int id : a.liveNonRoot())
    if (a.node(id).kind == ApgKind::MethodCall &&
        a.node(id).find(Role::CalleeName)->value == "toArray")
      call = &a.node(id);
  REQUIRE(call);
  const Component *rt = call->find(Role::ReceiverType);
  REQUIRE(rt);
  CHECK(rt->value == "ArrayList");
  CHECK(rt->inferred);
  CHECK(!call->find(Role::ReceiverName)->inferred);
}

TEST_CASE("bare declarations feed the type table without making nodes") {
  Apg a = build("int a;\nString s;\nfoo(a);\n");
  CHECK(a.liveCount() == 1);
  CHECK(a.declaredTypes.at("a") == "int");
  CHECK(a.declaredTypes.at("s") == "String");
}

TEST_CASE("loops, conditions, and try blocks nest their bodies") {
  Apg a = build("List<Order> orders = load();\n"
                "for (Order o : orders) {\n"
                "    if (o.isStale()) {\n"
                "        orders.remove(o);\n"
                "    }\n"
                "}\n"
                "try {\n"
                "    flush(orders[0]);\n"
                "} catch (RuntimeException e) {\n"
                "    throw e;\n"
                "}\n");
  CHECK(outline(a) ==
        "root\n"
        "  varDecl line=1 [declaredType=List<Order>, varName=orders]\n"
        "    methodCall line=1 [calleeName=load, argCount=0]\n"
        "  loop line=2 [varName=o, declaredType=Order, receiverName=orders, "
        "receiverType=List*]\n"
        "    condition line=3 [argSummary=o.isStale()]\n"
        "      methodCall line=4 [calleeName=remove, receiverName=orders, "
        "receiverType=List*, argCount=1, argSummary=o]\n"
        "  tryCatch line=7 [targetType=RuntimeException, varName=e]\n"
        "    methodCall line=8 [calleeName=flush, argCount=1]\n"
        "      arrayAccess line=8 [receiverName=orders, receiverType=List*, "
        "argSummary=0]\n"
        "    throwStmt line=10 [argSummary=e]\n");
  CHECK(isValidApg(a));
}

TEST_CASE("statement spans cover the full statement") {
  Apg a = build(kQuestion);
  const std::string &src = a.origin->text();
  const ApgNode &decl = a.node(a.node(a.root).children[0]);
  CHECK(src.substr(decl.stmtSpan.begin, decl.stmtSpan.end - decl.stmtSpan.begin) ==
        "ArrayList<String> image_urls = new ArrayList<String>();");
  const ApgNode &creation = a.node(decl.children[0]);
  CHECK(src.substr(creation.stmtSpan.begin,
                   creation.stmtSpan.end - creation.stmtSpan.begin) ==
        "new ArrayList<String>()");
}

TEST_CASE("method-scoped builds see only that body") {
  SyntaxTree t = parseUnit(makeSource("class Box {\n"
                                      "    int stored = 0;\n"
                                      "    void fill() {\n"
                                      "        stored = compute();\n"
                                      "    }\n"
                                      "    void drain() {\n"
                                      "        stored = 0;\n"
                                      "    }\n"
                                      "}\n"));
  REQUIRE(t.errors.empty());
  int fill = -1;
  for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i)
    if (t.nodes[i].kind == AstKind::MethodDecl && t.nodes[i].text == "fill")
      fill = i;
  REQUIRE(fill >= 0);
  Apg a = buildApgFromMethod(t, fill);
  CHECK(a.liveCount() == 2); // the assignment and its call
  bool sawCompute = false;
  for (int id : a.liveNonRoot())
    if (a.node(id).kind == ApgKind::MethodCall) {
      CHECK(a.node(id).find(Role::CalleeName)->value == "compute");
      sawCompute = true;
    }
  CHECK(sawCompute);
}

TEST_CASE("pruning keeps the named lines plus ancestors") {
  Apg a = build("List<Order> orders = load();\n"
                "for (Order o : orders) {\n"
                "    if (o.isStale()) {\n"
                "        orders.remove(o);\n"
                "    }\n"
                "}\n");
  Apg p = pruneApg(a, {4});
  CHECK(outline(p) ==
        "root\n"
        "  loop line=2 [varName=o, declaredType=Order, receiverName=orders, "
        "receiverType=List*]\n"
        "    condition line=3 [argSummary=o.isStale()]\n"
        "      methodCall line=4 [calleeName=remove, receiverName=orders, "
        "receiverType=List*, argCount=1, argSummary=o]\n");
  // Pruning is pure: the input keeps its shape.
  CHECK(a.liveCount() == 5);
  CHECK(p.declaredTypes.at("orders") == "List<Order>");
}

TEST_CASE("validity checks catch broken trees") {
  Apg a = build(kQuestion);
  std::string why;

  Apg badParent = a;
  badParent.node(badParent.node(badParent.root).children[0]).parent = 99;
  CHECK(!isValidApg(badParent, &why));
  CHECK(!why.empty());

  Apg badNode = a;
  for (int id : badNode.liveNonRoot())
    if (badNode.node(id).kind == ApgKind::MethodCall)
      badNode.node(id).components.clear();
  CHECK(!isValidApg(badNode, &why));
  CHECK(why == "methodCall without calleeName");
}

TEST_CASE("generic erasure and comparison normalization") {
  CHECK(eraseGenerics("List<String>") == "List");
  CHECK(eraseGenerics("Map<String, List<Integer>>") == "Map");
  CHECK(eraseGenerics("int[]") == "int[]");
  CHECK(eraseGenerics("List<String>[]") == "List[]");
  CHECK(normalizeForCompare(Role::DeclaredType, "java.util.List<String>") == "List");
  CHECK(normalizeForCompare(Role::TargetType, "ArrayList<URL>") == "ArrayList");
  CHECK(normalizeForCompare(Role::CalleeName, "toArray") == "toArray");
  CHECK(normalizeForCompare(Role::ArgSummary, "a.b(c)") == "a.b(c)");
}
