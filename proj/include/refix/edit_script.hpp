#pragma once

#include "refix/align.hpp"
#include "refix/apg.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace refix {

enum class EditOpType { Add, Delete, Update, Replace };

const char *editOpName(EditOpType t);

// Reference to a node: either an id in the script's subject APG, or the
// node created by an earlier add/replace in the same script.
struct AnchorRef {
  bool isNew = false;
  int value = -1; // node id, or creating op index when isNew
};

struct EditPos {
  bool asParent = false; // anchor is the single child the new node wraps
  int index = 0;         // child slot under the anchor
  int captured = 0;      // run of existing children absorbed by the new node
  bool iterSlot = false; // occupies a loop's iterated-expression slot
};

// Kind + hard components + substructure of a node an op introduces.
struct PayloadNode {
  ApgKind kind = ApgKind::MethodCall;
  std::vector<Component> components;
  std::vector<PayloadNode> children;
  bool receiverChild = false;
  int iterChildren = 0;
  int displayLine = 0;
};

struct EditOperation {
  EditOpType type = EditOpType::Delete;
  AnchorRef anchor;
  int anchorLine = 0;
  std::optional<PayloadNode> payload; // absent for delete
  std::optional<EditPos> pos;         // present only for add
};

struct EditScript {
  std::string sourceApgId;
  std::string targetApgId;
  std::vector<EditOperation> ops;

  bool empty() const { return ops.empty(); }
};

std::string describe(const EditScript &s);

struct TriangulationResult {
  std::set<int> quesRelevantLines;
  std::set<int> ansRelevantLines;
};

// Joint alignment of question, answer, and pattern: question lines matched by
// the pattern are relevant; answer lines matched to those plus answer lines
// with no question counterpart (new fix lines) are relevant.
TriangulationResult triangulate(const Apg &qApg, const Apg &aApg, const Apg &pApg,
                                const AbstractDefs *defs);

// Minimal edit script turning x into y: optimal tree mapping, then
// kind-incompatible pairs become replaces, unmapped x nodes deletes
// (postorder), differing mapped pairs updates, unmapped y nodes adds
// (preorder, with insertion positions from simulation).
EditScript deriveEditScript(const Apg &x, const Apg &y);

// Algorithm: remap anchors through the x~y node matching, rewrite payload
// tokens through the component correspondence, drop ops whose anchor has no
// counterpart or whose payload strays outside y's namespace.
EditScript adaptEditScript(const EditScript &t, const Apg &x, const Apg &y,
                           const AbstractDefs *defs);

class ApplyError : public std::runtime_error {
public:
  ApplyError(int opIndex, const std::string &what)
      : std::runtime_error("op " + std::to_string(opIndex) + ": " + what),
        opIndex(opIndex) {}
  int opIndex;
};

// Applies ops in order on a copy; throws ApplyError when an anchor fails to
// resolve. Argument counts are recomputed afterwards.
Apg applyScript(const Apg &apg, const EditScript &s);

// Shape + kind + hard-component equality (spans, lines, and inferred
// components up to presence are ignored). The derive/apply oracle relation.
bool structurallyEqual(const Apg &a, const Apg &b);

} // namespace refix
