#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loranrec {

struct ExtractedLines {
  std::vector<std::string> lines;
  std::string residual;
};

// Splits `carry + bytes` on LF, stripping one CR immediately before the LF.
// Bytes after the last LF come back as the residual. Pure byte framing: no
// decoding, empty lines are kept, a lone CR is an ordinary byte.
ExtractedLines extract_lines(std::string_view bytes, std::string_view carry);

// Incremental framer that also reports each line's byte offset in the stream.
class LineFramer {
 public:
  using Sink = std::function<void(std::string_view line, std::uint64_t offset)>;

  void feed(std::string_view bytes, const Sink& sink);
  // Emits a trailing unterminated line, if any. Returns true when one was emitted.
  bool finish(const Sink& sink);

  std::uint64_t consumed() const { return consumed_; }

 private:
  std::string carry_;
  std::uint64_t carry_offset_ = 0;
  std::uint64_t consumed_ = 0;
};

}  // namespace loranrec
