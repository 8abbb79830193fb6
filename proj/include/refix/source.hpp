#pragma once

#include <memory>
#include <string>
#include <vector>

namespace refix {

// Half-open byte range into an owning SourceText.
struct Span {
  int begin = -1;
  int end = -1;

  bool valid() const { return begin >= 0 && end >= begin; }
  int length() const { return valid() ? end - begin : 0; }
  bool contains(int off) const { return valid() && off >= begin && off < end; }
};

// Immutable text plus a line table; everything downstream (tokens, AST,
// APG components, patch edits) addresses it by byte offset.
class SourceText {
public:
  explicit SourceText(std::string text, std::string name = "snippet")
      : text_(std::move(text)), name_(std::move(name)) {
    lineStarts_.push_back(0);
    for (int i = 0; i < static_cast<int>(text_.size()); ++i)
      if (text_[i] == '\n') lineStarts_.push_back(i + 1);
  }

  const std::string &text() const { return text_; }
  const std::string &name() const { return name_; }
  int size() const { return static_cast<int>(text_.size()); }
  int lineCount() const { return static_cast<int>(lineStarts_.size()); }

  // 1-based line for a byte offset.
  int lineOf(int offset) const {
    int lo = 0, hi = static_cast<int>(lineStarts_.size()) - 1;
    while (lo < hi) {
      int mid = (lo + hi + 1) / 2;
      if (lineStarts_[mid] <= offset)
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo + 1;
  }

  // 1-based column for a byte offset.
  int colOf(int offset) const { return offset - lineStarts_[lineOf(offset) - 1] + 1; }

  // Byte offset where a 1-based line starts; size() when past the end.
  int lineStart(int line) const {
    if (line < 1) return 0;
    if (line > lineCount()) return size();
    return lineStarts_[line - 1];
  }

  // End offset of a 1-based line, excluding the newline.
  int lineEnd(int line) const {
    if (line < 1) return 0;
    if (line >= lineCount()) return size();
    return lineStarts_[line] - 1;
  }

  std::string slice(const Span &s) const {
    if (!s.valid() || s.begin >= size()) return {};
    int e = std::min(s.end, size());
    return text_.substr(s.begin, e - s.begin);
  }

  std::string lineText(int line) const {
    return text_.substr(lineStart(line), lineEnd(line) - lineStart(line));
  }

private:
  std::string text_;
  std::string name_;
  std::vector<int> lineStarts_;
};

using SourcePtr = std::shared_ptr<const SourceText>;

inline SourcePtr makeSource(std::string text, std::string name = "snippet") {
  return std::make_shared<SourceText>(std::move(text), std::move(name));
}

} // namespace refix
