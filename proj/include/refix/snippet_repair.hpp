#pragma once

#include "refix/parser.hpp"

#include <string>
#include <vector>

namespace refix {

struct RepairStep {
  std::string action;
  int line = 0;
  std::string removed;
  std::string inserted;
};

struct RepairOutcome {
  SourcePtr repaired;
  SyntaxTree tree;
  bool parsable = false;
  bool changed = false;
  std::vector<RepairStep> steps;
  std::vector<int> errorCounts; // error total after each parse, initial first
};

// Default value for a declared type: 0 for numerics, false for boolean,
// "" for String, an empty array/collection for those shapes, new T() else.
std::string defaultInitializer(const std::string &type);

// Error-driven rewrite loop: fix the earliest syntax error, re-parse, and
// continue while the error count strictly decreases.
RepairOutcome repairSnippet(const std::string &text, ParseOptions opts = {},
                            const std::string &name = "snippet");

} // namespace refix
