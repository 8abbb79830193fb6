#include "refix/cli.hpp"

#include "refix/corpus.hpp"
#include "refix/curation.hpp"
#include "refix/esp.hpp"
#include "refix/repair.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace refix {

std::string escapeField(const std::string &s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
  return out;
}

namespace {

std::string envDefault(const char *var, const std::string &fallback) {
  const char *v = std::getenv(var);
  return v && *v ? v : fallback;
}

std::string pct(long part, long whole) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1)
     << (whole > 0 ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0)
     << "%";
  return os.str();
}

int cmdPrepare(const std::string &dump, const std::string &out, std::ostream &os,
               std::ostream &err) {
  try {
    CorpusStats st = ingestPosts(dump, out);
    os << "posts " << st.totalPosts << " accepted " << st.acceptedPosts << "\n";
    os << "snippets " << st.totalSnippets << " readily-parsable " << st.readilyParsable
       << " (" << pct(st.readilyParsable, st.totalSnippets) << ")"
       << " after-repair " << (st.readilyParsable + st.repairedParsable) << " ("
       << pct(st.readilyParsable + st.repairedParsable, st.totalSnippets) << ")\n";
    return 0;
  } catch (const std::exception &e) {
    err << "prepare: " << e.what() << "\n";
    return 1;
  }
}

int cmdMine(const std::string &corpusDir, const std::string &libDir,
            const std::string &reType, int limit, std::istream &in, std::ostream &os,
            std::ostream &err) {
  std::vector<Post> posts;
  PatternLibrary lib;
  try {
    posts = loadCorpus(corpusDir);
  } catch (const std::exception &e) {
    err << "mine: " << e.what() << "\n";
    return 1;
  }
  try {
    lib = loadLibrary(libDir);
  } catch (const std::exception &) {
    // an empty library is where mining starts
  }

  MiningProvider provider = [&](const MiningPrompt &p) {
    MiningVerdict v;
    for (const std::string &problem : p.problems) os << "problem " << problem << "\n";
    os << "post " << p.post->id << " votes " << p.post->votes << " title "
       << escapeField(p.post->title) << "\n";
    if (!p.snippet.empty()) {
      os << "snippet\n";
      std::istringstream lines(p.snippet);
      std::string l;
      int n = 1;
      while (std::getline(lines, l)) os << "  " << n++ << " " << l << "\n";
    }
    if (!p.highlightLines.empty()) {
      os << "covered";
      for (int l : p.highlightLines) os << " " << l;
      os << "\n";
    }
    os << "verdict?\n";
    os.flush();

    std::string line;
    if (!std::getline(in, line)) {
      v.kind = MiningVerdict::Stop;
      return v;
    }
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "skip") {
      v.kind = MiningVerdict::Skip;
    } else if (word == "pattern") {
      v.kind = MiningVerdict::ProvidePattern;
      ls >> v.patternName;
      std::string body, bl;
      while (std::getline(in, bl) && bl != "end") body += bl + "\n";
      v.patternText = body;
    } else {
      v.kind = MiningVerdict::Stop;
    }
    return v;
  };

  MiningResult r = runMiningSession(lib, posts, reType, limit, provider);
  try {
    saveLibrary(libDir, lib);
  } catch (const std::exception &e) {
    err << "mine: " << e.what() << "\n";
    return 1;
  }
  os << "mined " << r.patternsAdded << " visited " << r.postsVisited
     << (r.exhausted ? " exhausted" : "") << "\n";
  return 0;
}

int cmdIndex(const std::string &corpusDir, const std::string &libDir,
             const std::string &outDir, std::ostream &os, std::ostream &err) {
  try {
    std::vector<Post> posts = loadCorpus(corpusDir);
    PatternLibrary lib = loadLibrary(libDir);
    buildIndex(lib, posts, outDir);
    std::set<std::string> types;
    for (const Esp &e : lib.patterns) types.insert(e.reType);
    for (const std::string &t : types) {
      std::vector<IndexEntry> entries = loadIndex(outDir, t);
      os << t << " " << entries.size() << "\n";
    }
    return 0;
  } catch (const std::exception &e) {
    err << "index: " << e.what() << "\n";
    return 1;
  }
}

int cmdFix(const std::string &file, int line, const std::string &reType,
           const std::string &corpusDir, const std::string &libDir,
           const std::string &indexDir, const FixConfig &cfg, bool structured,
           std::ostream &os, std::ostream &err) {
  std::ifstream f(file);
  if (!f) {
    err << "fix: cannot open " << file << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << f.rdbuf();

  std::vector<Post> posts;
  PatternLibrary lib;
  std::vector<IndexEntry> index;
  try {
    posts = loadCorpus(corpusDir);
    lib = loadLibrary(libDir);
  } catch (const std::exception &e) {
    err << "fix: " << e.what() << "\n";
    return 1;
  }
  if (!reType.empty()) {
    try {
      index = loadIndex(indexDir, reType);
    } catch (const std::exception &) {
      // a type with no indexed posts is a no-result, not a usage error
    }
  }

  std::string name = std::filesystem::path(file).filename().string();
  FixResult r = fix(buf.str(), name, line, reType, lib, posts, index, cfg);

  if (structured) {
    if (!r.diagnostics.chosenPattern.empty())
      os << "pattern\tname=" << r.diagnostics.chosenPattern << "\tscore=" << std::fixed
         << std::setprecision(6) << r.diagnostics.patternScore << "\n";
    int rank = 1;
    for (const PatchCandidate &p : r.patches) {
      os << "patch\trank=" << rank++ << "\tpost=" << p.postId << "\tanswer=" << p.answerId
         << "\tscore=" << std::fixed << std::setprecision(6) << p.postScore
         << "\tdiff=" << escapeField(p.diff) << "\n";
    }
    if (r.patches.empty() && !r.fallbackPostId.empty())
      os << "fallback\tpost=" << r.fallbackPostId << "\n";
  } else {
    if (!r.diagnostics.chosenPattern.empty())
      os << "pattern " << r.diagnostics.chosenPattern << " score " << std::fixed
         << std::setprecision(6) << r.diagnostics.patternScore << "\n";
    int rank = 1;
    for (const PatchCandidate &p : r.patches) {
      os << "--- patch " << rank++ << " from post " << p.postId << " answer " << p.answerId
         << " ---\n";
      os << p.diff;
      if (!p.diff.empty() && p.diff.back() != '\n') os << "\n";
    }
    if (r.patches.empty() && !r.fallbackPostId.empty())
      os << "no patch synthesized; closest post " << r.fallbackPostId << "\n";
  }
  return r.any() ? 0 : 2;
}

} // namespace

int runCli(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"repairs runtime exceptions from community fixes"};
  app.require_subcommand(1);

  std::string corpusDir = envDefault("REFIX_CORPUS", "corpus");
  std::string libDir = envDefault("REFIX_LIBRARY", "library");
  std::string indexDir = envDefault("REFIX_INDEX", "index");

  auto *prepare = app.add_subcommand("prepare", "filter a raw dump into a corpus");
  std::string dumpPath, prepareOut;
  prepare->add_option("--dump", dumpPath, "raw ndjson posts")->required();
  prepare->add_option("--out", prepareOut, "corpus directory")->required();

  auto *mine = app.add_subcommand("mine", "review posts into patterns");
  std::string mineType;
  int limit = 3;
  mine->add_option("--corpus", corpusDir, "corpus directory");
  mine->add_option("--library", libDir, "pattern library directory");
  mine->add_option("--retype", mineType, "exception type")->required();
  mine->add_option("--u", limit, "unproductive-suggestion limit");

  auto *indexCmd = app.add_subcommand("index", "score posts against patterns");
  std::string indexOut;
  indexCmd->add_option("--corpus", corpusDir, "corpus directory");
  indexCmd->add_option("--library", libDir, "pattern library directory");
  indexCmd->add_option("--out", indexOut, "index directory");

  auto *fixCmd = app.add_subcommand("fix", "synthesize patches for a crash");
  std::string file, fixType;
  int line = 0;
  FixConfig cfg;
  bool structured = false;
  fixCmd->add_option("--file", file, "crashing source file")->required();
  fixCmd->add_option("--line", line, "failing line")->required();
  fixCmd->add_option("--retype", fixType, "exception type")->required();
  fixCmd->add_option("--corpus", corpusDir, "corpus directory");
  fixCmd->add_option("--library", libDir, "pattern library directory");
  fixCmd->add_option("--index", indexDir, "index directory");
  fixCmd->add_option("--k", cfg.k, "patches to return");
  fixCmd->add_option("--z", cfg.z, "posts to examine");
  fixCmd->add_option("--tau", cfg.tau, "pattern threshold");
  fixCmd->add_flag("--parallel", cfg.parallel, "process posts concurrently");
  fixCmd->add_flag("--structured", structured, "machine-readable records");

  std::vector<std::string> argv(args);
  try {
    std::vector<const char *> cargs;
    cargs.push_back("refix");
    for (const std::string &a : argv) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "refix: " << e.what() << "\n";
    return 1;
  }

  if (prepare->parsed()) return cmdPrepare(dumpPath, prepareOut, out, err);
  if (mine->parsed()) return cmdMine(corpusDir, libDir, mineType, limit, in, out, err);
  if (indexCmd->parsed())
    return cmdIndex(corpusDir, libDir, indexOut.empty() ? indexDir : indexOut, out, err);
  if (fixCmd->parsed())
    return cmdFix(file, line, fixType, corpusDir, libDir, indexDir, cfg, structured, out,
                  err);
  err << "refix: no command\n";
  return 1;
}

} // namespace refix
