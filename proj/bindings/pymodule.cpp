#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "refix/apg.hpp"
#include "refix/corpus.hpp"
#include "refix/curation.hpp"
#include "refix/edit_script.hpp"
#include "refix/esp.hpp"
#include "refix/repair.hpp"
#include "refix/snippet_repair.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace refix;

namespace {

Apg apgOf(const std::string &text) {
  RepairOutcome r = repairSnippet(text);
  if (!r.parsable) throw std::invalid_argument("snippet is not parsable, even repaired");
  return buildApg(r.tree);
}

py::dict repairSnippetPy(const std::string &text) {
  RepairOutcome r = repairSnippet(text);
  py::dict out;
  out["parsable"] = r.parsable;
  out["changed"] = r.changed;
  out["text"] = r.repaired ? r.repaired->text() : text;
  out["error_counts"] = r.errorCounts;
  py::list steps;
  for (const RepairStep &s : r.steps) {
    py::dict d;
    d["action"] = s.action;
    d["line"] = s.line;
    d["removed"] = s.removed;
    d["inserted"] = s.inserted;
    steps.append(d);
  }
  out["steps"] = steps;
  return out;
}

std::string outlinePy(const std::string &text) { return outline(apgOf(text)); }

py::dict matchPatternPy(const std::string &patternText, const std::string &name,
                        const std::string &snippetText) {
  std::vector<std::string> errors;
  Esp esp = parsePattern(patternText, name, errors);
  if (!errors.empty()) {
    std::string msg;
    for (const std::string &e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw std::invalid_argument(msg);
  }
  MatchResult m = matchPattern(esp, apgOf(snippetText));
  py::dict out;
  out["score"] = m.score;
  out["bindings"] = m.binding.map;
  out["matched_nodes"] = static_cast<int>(m.matched.size());
  return out;
}

std::string deriveScriptPy(const std::string &before, const std::string &after) {
  return describe(deriveEditScript(apgOf(before), apgOf(after)));
}

py::dict prepareCorpusPy(const std::string &dump, const std::string &outDir) {
  CorpusStats st = ingestPosts(dump, outDir);
  py::dict out;
  out["total_posts"] = st.totalPosts;
  out["accepted_posts"] = st.acceptedPosts;
  out["total_snippets"] = st.totalSnippets;
  out["readily_parsable"] = st.readilyParsable;
  out["repaired_parsable"] = st.repairedParsable;
  return out;
}

py::dict buildIndexPy(const std::string &corpusDir, const std::string &libDir,
                      const std::string &indexDir) {
  std::vector<Post> posts = loadCorpus(corpusDir);
  PatternLibrary lib = loadLibrary(libDir);
  buildIndex(lib, posts, indexDir);
  py::dict out;
  std::set<std::string> types;
  for (const Esp &e : lib.patterns) types.insert(e.reType);
  for (const std::string &t : types)
    out[py::str(t)] = static_cast<int>(loadIndex(indexDir, t).size());
  return out;
}

py::dict fixPy(const std::string &text, const std::string &fileName, int line,
               const std::string &reType, const std::string &corpusDir,
               const std::string &libDir, const std::string &indexDir, int k, int z,
               double tau, bool parallel) {
  std::vector<Post> posts = loadCorpus(corpusDir);
  PatternLibrary lib = loadLibrary(libDir);
  std::vector<IndexEntry> index;
  try {
    index = loadIndex(indexDir, reType);
  } catch (const std::exception &) {
    // a type with no indexed posts simply yields no candidates
  }
  FixConfig cfg;
  cfg.k = k;
  cfg.z = z;
  cfg.tau = tau;
  cfg.parallel = parallel;
  FixResult r = fix(text, fileName, line, reType, lib, posts, index, cfg);

  py::dict out;
  out["pattern"] = r.diagnostics.chosenPattern;
  out["pattern_score"] = r.diagnostics.patternScore;
  py::list patches;
  int rank = 1;
  for (const PatchCandidate &p : r.patches) {
    py::dict d;
    d["rank"] = rank++;
    d["post"] = p.postId;
    d["answer"] = p.answerId;
    d["score"] = p.postScore;
    d["diff"] = p.diff;
    d["patched_text"] = p.patchedText;
    patches.append(d);
  }
  out["patches"] = patches;
  out["fallback_post"] = r.fallbackPostId;
  out["notes"] = r.diagnostics.notes;
  return out;
}

} // namespace

PYBIND11_MODULE(_refix, m) {
  m.doc() = "patch synthesis for Java runtime exceptions from community Q&A";

  m.def("repair_snippet", &repairSnippetPy, py::arg("text"),
        "Error-driven rewrite of a code snippet until it parses.");
  m.def("outline_snippet", &outlinePy, py::arg("text"),
        "Abstract program graph outline of a (repaired) snippet.");
  m.def("match_pattern", &matchPatternPy, py::arg("pattern"), py::arg("name"),
        py::arg("snippet"), "Score a scenario pattern against a snippet.");
  m.def("derive_script", &deriveScriptPy, py::arg("before"), py::arg("after"),
        "Readable edit script turning one snippet into another.");
  m.def("prepare_corpus", &prepareCorpusPy, py::arg("dump"), py::arg("out_dir"),
        "Filter a raw ndjson post dump into a corpus directory.");
  m.def("build_index", &buildIndexPy, py::arg("corpus_dir"), py::arg("library_dir"),
        py::arg("index_dir"), "Score corpus posts against every library pattern.");
  m.def("fix", &fixPy, py::arg("text"), py::arg("file_name"), py::arg("line"),
        py::arg("retype"), py::arg("corpus_dir"), py::arg("library_dir"),
        py::arg("index_dir"), py::arg("k") = 3, py::arg("z") = 15,
        py::arg("tau") = 0.5, py::arg("parallel") = false,
        "Synthesize ranked repair patches for a crash site.");
}
