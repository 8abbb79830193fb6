#pragma once

#include "refix/parser.hpp"
#include "refix/source.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace refix {

enum class ApgKind {
  Root,
  MethodCall,
  ClassCast,
  VarDecl,
  Assignment,
  Loop,
  Condition,
  ArrayAccess,
  ObjectCreation,
  ArrayCreation,
  TryCatch,
  ThrowStmt,
  ReturnStmt,
  Literal,
  VarRef,
  BinaryOp,
};

const char *apgKindName(ApgKind k);

enum class Role {
  CalleeName,
  ReceiverName,
  ReceiverType,
  TargetType,
  DeclaredType,
  VarName,
  ArgCount,
  ArgSummary,
  Operator,
  LiteralKind,
};

const char *roleName(Role r);

// Roles whose values may be inferred from surrounding declarations rather
// than written at the node itself.
bool isInferableRole(Role r);
bool isTypeRole(Role r);

struct Component {
  Role role;
  std::string value;
  Span span;            // invalid for inferred components
  bool inferred = false; // declaration-derived; carries no renderable text

  Component() : role(Role::ArgSummary) {}
  Component(Role r, std::string v, Span s = {}, bool inf = false)
      : role(r), value(std::move(v)), span(s), inferred(inf) {}
};

// Entry in a node's rendered argument list: either an argSummary component
// (by index into components) or a structural child (by index into children).
struct ArgRef {
  bool isChild = false;
  int index = 0;
};

struct ApgNode {
  ApgKind kind = ApgKind::Root;
  std::vector<Component> components;
  int sourceLine = 0;
  int parent = -1;
  std::vector<int> children;
  bool alive = true;      // false once an edit deletes it
  bool synthetic = false; // introduced by an edit script, no origin spans
  bool statementLevel = false;
  bool receiverChild = false; // children[0] renders as the call receiver
  int iterChildren = 0;       // leading children occupying a loop's iterator slot

  Span stmtSpan;               // whole statement, terminator included
  std::vector<Span> ownedSpans; // node text minus structural-child text
  Span argListSpan;             // interior of the argument parens/brackets
  Span iterSlotSpan;            // enhanced-for iterated expression
  std::vector<ArgRef> argOrder;

  const Component *find(Role r, int nth = 0) const {
    for (const auto &c : components)
      if (c.role == r && nth-- == 0) return &c;
    return nullptr;
  }
};

struct Apg {
  std::vector<ApgNode> nodes; // index 0 is the synthetic root
  int root = 0;
  SourcePtr origin;
  // Identifier -> raw declared type, for inference and namespace checks.
  std::map<std::string, std::string> declaredTypes;

  const ApgNode &node(int id) const { return nodes[id]; }
  ApgNode &node(int id) { return nodes[id]; }

  std::vector<int> preorder() const;      // live nodes, root first
  std::vector<int> liveNonRoot() const;   // preorder minus the root
  int liveCount() const;                  // non-root live nodes
};

// One APG node per abstraction-relevant statement or structural expression.
// Bare declarations feed declaredTypes but produce no node.
Apg buildApg(const SyntaxTree &tree);
// Restrict to one method's body (pattern files, buggy-window extraction).
Apg buildApgFromMethod(const SyntaxTree &tree, int methodNodeId);

// Keep nodes on the given lines plus their ancestors; pure.
Apg pruneApg(const Apg &apg, const std::set<int> &lines);

// Structural sanity: single root, acyclic, parent/child agreement, required
// components present per kind.
bool isValidApg(const Apg &apg, std::string *why = nullptr);

// Stable, human-readable tree dump used by tests and the CLI.
std::string outline(const Apg &apg);

// Strip generic argument sections ("List<String>" -> "List").
std::string eraseGenerics(const std::string &type);

// Comparison form: generics stripped and package qualifiers dropped for
// type-valued roles; other roles compare raw.
std::string normalizeForCompare(Role role, const std::string &value);

} // namespace refix
