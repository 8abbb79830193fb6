#pragma once

#include <string>
#include <vector>

namespace refix {

struct Answer {
  std::string id;
  int votes = 0;
  std::string body;
};

struct Post {
  std::string id;
  std::string title;
  std::vector<std::string> tags;
  int votes = 0;
  std::string questionBody;
  std::vector<Answer> answers;
  std::string acceptedAnswerId; // empty when none marked
  std::string reType;           // exception type detected in the title
};

struct CorpusStats {
  long totalPosts = 0;
  long acceptedPosts = 0;
  long totalSnippets = 0;
  long readilyParsable = 0;
  long repairedParsable = 0;
};

// The runtime exception types recognized in post titles.
const std::vector<std::string> &defaultExceptionTypes();

// First recognized type appearing as a whole word (case-sensitive); empty
// string when the title names none.
std::string detectExceptionType(const std::string &title,
                                const std::vector<std::string> &types);

// Code blocks from a post body: fenced ``` blocks and <pre><code> blocks,
// HTML entities decoded.
std::vector<std::string> extractSnippets(const std::string &body);

// Filters a raw ndjson dump into a corpus directory (posts.ndjson +
// stats.tsv). A post is kept when its title names a recognized exception,
// it is tagged java or android, it has an answer, and at least one question
// snippet parses, possibly after repair.
CorpusStats ingestPosts(const std::string &dumpPath, const std::string &outDir,
                        const std::vector<std::string> &types = defaultExceptionTypes());

void saveCorpus(const std::string &dir, const std::vector<Post> &posts,
                const CorpusStats &stats);

// Throws std::runtime_error with a cause-specific message on missing files,
// version mismatch, malformed records, or a record-count footer that does
// not match (truncated corpus).
std::vector<Post> loadCorpus(const std::string &dir);

} // namespace refix
