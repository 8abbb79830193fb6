#pragma once

#include "refix/apg.hpp"

#include <string>

namespace refix {

struct RenderedPatch {
  std::string patchedText;
  std::string diffText;
  bool parses = false;
  bool emptyDiff = false;
};

// Textual realization of `modified` (an applyScript result) against
// `original`'s source. Deleted nodes lose their owned spans (whole lines
// when nothing else remains on them), updated components are rewritten in
// place, and synthetic subtrees are pretty-printed into argument lists,
// iterator slots, or fresh statement lines.
RenderedPatch renderPatch(const Apg &original, const Apg &modified);

// Classic unified diff, three lines of context, no timestamps.
std::string unifiedDiff(const std::string &aText, const std::string &bText,
                        const std::string &label);

} // namespace refix
