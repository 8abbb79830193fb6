#pragma once

// Random Java-ish snippet generator shared by the randomized oracle tests.

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testgen {

class SnippetGen {
public:
  explicit SnippetGen(unsigned seed) : rng_(seed) {}

  std::string snippet(int statements) {
    lines_.clear();
    for (int i = 0; i < statements; ++i) stmt(0);
    return join(lines_);
  }

  // A structurally nearby variant: drop a line, append a statement, or
  // rename an identifier.
  std::string variant(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    switch (pick(3)) {
    case 0:
      for (int tries = 0; tries < 8; ++tries) {
        int i = pick(static_cast<int>(lines.size()));
        if (lines[i].find('{') == std::string::npos &&
            lines[i].find('}') == std::string::npos) {
          lines.erase(lines.begin() + i);
          break;
        }
      }
      break;
    case 1: {
      lines_.clear();
      stmt(0);
      for (auto &x : lines_) lines.push_back(x);
      break;
    }
    case 2:
      for (int tries = 0; tries < 8; ++tries) {
        int i = pick(static_cast<int>(lines.size()));
        size_t at = lines[i].find("v1");
        if (at != std::string::npos) {
          lines[i].replace(at, 2, "v9");
          break;
        }
      }
      break;
    }
    return join(lines);
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

private:
  void stmt(int depth) {
    int v = pick(3), w = pick(3), t = pick(3);
    static const char *types[] = {"String", "Order", "Item"};
    static const char *calls[] = {"add", "remove", "get"};
    std::string pad(depth * 4, ' ');
    switch (pick(6)) {
    case 0:
      lines_.push_back(pad + "ArrayList<" + types[t] + "> v" + std::to_string(v) +
                       " = new ArrayList<" + types[t] + ">();");
      break;
    case 1:
      lines_.push_back(pad + "v" + std::to_string(v) + "." + calls[pick(3)] + "(x" +
                       std::to_string(w) + ");");
      break;
    case 2:
      lines_.push_back(pad + "v" + std::to_string(v) + ".clear();");
      break;
    case 3:
      lines_.push_back(pad + std::string(types[t]) + " y" + std::to_string(v) + " = v" +
                       std::to_string(w) + ".get(" + std::to_string(pick(4)) + ");");
      break;
    case 4:
      lines_.push_back(pad + "for (" + types[t] + " e" + std::to_string(v) + " : v" +
                       std::to_string(w) + ") {");
      stmt(depth + 1);
      lines_.push_back(pad + "}");
      break;
    case 5:
      lines_.push_back(pad + "n" + std::to_string(v) + " = n" + std::to_string(w) +
                       " + 1;");
      break;
    }
  }

  static std::string join(const std::vector<std::string> &lines) {
    std::string out;
    for (auto &l : lines) out += l + "\n";
    return out;
  }

  std::mt19937 rng_;
  std::vector<std::string> lines_;
};

} // namespace testgen
