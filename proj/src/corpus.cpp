#include "refix/corpus.hpp"

#include "refix/snippet_repair.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace refix {

const std::vector<std::string> &defaultExceptionTypes() {
  static const std::vector<std::string> types = {
      "NullPointerException",
      "ClassCastException",
      "ConcurrentModificationException",
      "ArrayIndexOutOfBoundsException",
      "IndexOutOfBoundsException",
      "StringIndexOutOfBoundsException",
      "NumberFormatException",
      "IllegalArgumentException",
      "IllegalStateException",
      "UnsupportedOperationException",
      "ArithmeticException",
      "ClassNotFoundException",
      "NoSuchElementException",
      "NoSuchMethodException",
      "NegativeArraySizeException",
      "ArrayStoreException",
      "NoSuchFieldException",
      "InputMismatchException",
      "EmptyStackException",
  };
  return types;
}

namespace {

bool wordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

} // namespace

std::string detectExceptionType(const std::string &title,
                                const std::vector<std::string> &types) {
  size_t bestPos = std::string::npos;
  std::string best;
  for (const std::string &t : types) {
    size_t from = 0;
    while (true) {
      size_t p = title.find(t, from);
      if (p == std::string::npos) break;
      bool leftOk = p == 0 || !wordChar(title[p - 1]);
      size_t after = p + t.size();
      bool rightOk = after >= title.size() || !wordChar(title[after]);
      if (leftOk && rightOk) {
        if (p < bestPos) {
          bestPos = p;
          best = t;
        }
        break;
      }
      from = p + 1;
    }
  }
  return best;
}

namespace {

std::string decodeEntities(const std::string &s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    size_t semi = s.find(';', i + 1);
    if (semi == std::string::npos || semi - i > 8) {
      out += s[i++];
      continue;
    }
    std::string ent = s.substr(i + 1, semi - i - 1);
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos" || ent == "#39") out += '\'';
    else if (ent == "nbsp") out += ' ';
    else if (!ent.empty() && ent[0] == '#') {
      int code = std::atoi(ent.c_str() + 1);
      if (code > 0 && code < 128) out += static_cast<char>(code);
    } else {
      out += s.substr(i, semi - i + 1);
      i = semi + 1;
      continue;
    }
    i = semi + 1;
  }
  return out;
}

std::string trimBlankEdges(const std::string &s) {
  size_t begin = 0, end = s.size();
  while (begin < end && (s[begin] == '\n' || s[begin] == '\r')) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

} // namespace

std::vector<std::string> extractSnippets(const std::string &body) {
  std::vector<std::string> out;

  size_t i = 0;
  while (true) {
    size_t open = body.find("```", i);
    if (open == std::string::npos) break;
    size_t nl = body.find('\n', open + 3); // language tag line ignored
    if (nl == std::string::npos) break;
    size_t close = body.find("```", nl + 1);
    if (close == std::string::npos) break;
    std::string code = trimBlankEdges(body.substr(nl + 1, close - nl - 1));
    if (!code.empty()) out.push_back(code);
    i = close + 3;
  }

  i = 0;
  while (true) {
    size_t pre = body.find("<pre", i);
    if (pre == std::string::npos) break;
    size_t preEnd = body.find('>', pre);
    if (preEnd == std::string::npos) break;
    size_t code = body.find("<code", preEnd);
    if (code == std::string::npos) break;
    size_t codeEnd = body.find('>', code);
    if (codeEnd == std::string::npos) break;
    size_t close = body.find("</code>", codeEnd);
    if (close == std::string::npos) break;
    std::string text = trimBlankEdges(decodeEntities(body.substr(codeEnd + 1, close - codeEnd - 1)));
    if (!text.empty()) out.push_back(text);
    i = close + 7;
  }
  return out;
}

namespace {

constexpr int kCorpusVersion = 1;

std::string jsonString(const json &j, const char *key) {
  if (!j.contains(key)) return "";
  const json &v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return "";
}

Post parsePostRecord(const json &j) {
  Post p;
  p.id = jsonString(j, "id");
  p.title = j.value("title", std::string());
  if (j.contains("tags"))
    for (const auto &t : j.at("tags")) p.tags.push_back(t.get<std::string>());
  p.votes = j.value("votes", 0);
  p.questionBody = j.value("question_body", std::string());
  p.acceptedAnswerId = jsonString(j, "accepted_answer_id");
  if (j.contains("answers")) {
    for (const auto &a : j.at("answers")) {
      Answer ans;
      ans.id = jsonString(a, "id");
      ans.votes = a.value("votes", 0);
      ans.body = a.value("body", std::string());
      p.answers.push_back(std::move(ans));
    }
  }
  p.reType = j.value("re_type", std::string());
  return p;
}

json postToJson(const Post &p) {
  json j;
  j["id"] = p.id;
  j["title"] = p.title;
  j["tags"] = p.tags;
  j["votes"] = p.votes;
  j["question_body"] = p.questionBody;
  if (!p.acceptedAnswerId.empty()) j["accepted_answer_id"] = p.acceptedAnswerId;
  json answers = json::array();
  for (const Answer &a : p.answers) {
    json aj;
    aj["id"] = a.id;
    aj["votes"] = a.votes;
    aj["body"] = a.body;
    answers.push_back(std::move(aj));
  }
  j["answers"] = std::move(answers);
  j["re_type"] = p.reType;
  return j;
}

} // namespace

void saveCorpus(const std::string &dir, const std::vector<Post> &posts,
                const CorpusStats &stats) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / "posts.ndjson");
  json header;
  header["refix_corpus"] = kCorpusVersion;
  out << header.dump() << "\n";
  for (const Post &p : posts) out << postToJson(p).dump() << "\n";
  json footer;
  footer["record_count"] = posts.size();
  out << footer.dump() << "\n";

  std::ofstream st(fs::path(dir) / "stats.tsv");
  st << "totalPosts\t" << stats.totalPosts << "\n";
  st << "acceptedPosts\t" << stats.acceptedPosts << "\n";
  st << "totalSnippets\t" << stats.totalSnippets << "\n";
  st << "readilyParsable\t" << stats.readilyParsable << "\n";
  st << "repairedParsable\t" << stats.repairedParsable << "\n";
}

std::vector<Post> loadCorpus(const std::string &dir) {
  fs::path path = fs::path(dir) / "posts.ndjson";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("corpus: empty file " + path.string());
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("refix_corpus"))
    throw std::runtime_error("corpus: missing version header");
  if (header.at("refix_corpus").get<int>() != kCorpusVersion)
    throw std::runtime_error("corpus: unsupported version " +
                             header.at("refix_corpus").dump());

  std::vector<Post> posts;
  bool sawFooter = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw std::runtime_error("corpus: malformed record at line " +
                               std::to_string(posts.size() + 2));
    if (j.contains("record_count")) {
      long expected = j.at("record_count").get<long>();
      if (expected != static_cast<long>(posts.size()))
        throw std::runtime_error("corpus: truncated: footer says " +
                                 std::to_string(expected) + " records, found " +
                                 std::to_string(posts.size()));
      sawFooter = true;
      break;
    }
    posts.push_back(parsePostRecord(j));
  }
  if (!sawFooter)
    throw std::runtime_error("corpus: truncated: record-count footer missing");
  return posts;
}

CorpusStats ingestPosts(const std::string &dumpPath, const std::string &outDir,
                        const std::vector<std::string> &types) {
  std::ifstream in(dumpPath);
  if (!in) throw std::runtime_error("corpus: cannot open " + dumpPath);

  CorpusStats stats;
  std::vector<Post> accepted;
  std::string line;
  long lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw std::runtime_error("corpus: malformed dump record at line " +
                               std::to_string(lineNo));
    Post p = parsePostRecord(j);
    ++stats.totalPosts;

    bool anyParsable = false;
    for (const std::string &code : extractSnippets(p.questionBody)) {
      ++stats.totalSnippets;
      RepairOutcome r = repairSnippet(code);
      if (r.parsable && !r.changed) {
        ++stats.readilyParsable;
        anyParsable = true;
      } else if (r.parsable) {
        ++stats.repairedParsable;
        anyParsable = true;
      }
    }

    p.reType = detectExceptionType(p.title, types);
    if (p.reType.empty()) continue;
    bool tagged = false;
    for (const std::string &t : p.tags)
      if (t == "java" || t == "android") tagged = true;
    if (!tagged) continue;
    if (p.answers.empty()) continue;
    if (!anyParsable) continue;

    ++stats.acceptedPosts;
    accepted.push_back(std::move(p));
  }

  saveCorpus(outDir, accepted, stats);
  return stats;
}

} // namespace refix
