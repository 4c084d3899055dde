#include "loranrec/classify/framing.hpp"

namespace loranrec {
namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

ExtractedLines extract_lines(std::string_view bytes, std::string_view carry) {
  ExtractedLines out;
  std::string pending(carry);
  std::size_t start = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] != '\n') continue;
    pending.append(bytes.substr(start, i - start));
    out.lines.emplace_back(strip_cr(pending));
    pending.clear();
    start = i + 1;
  }
  pending.append(bytes.substr(start));
  out.residual = std::move(pending);
  return out;
}

void LineFramer::feed(std::string_view bytes, const Sink& sink) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] != '\n') continue;
    if (carry_.empty()) {
      sink(strip_cr(bytes.substr(start, i - start)), consumed_ + start);
    } else {
      carry_.append(bytes.substr(start, i - start));
      sink(strip_cr(carry_), carry_offset_);
      carry_.clear();
    }
    start = i + 1;
  }
  if (start < bytes.size()) {
    if (carry_.empty()) carry_offset_ = consumed_ + start;
    carry_.append(bytes.substr(start));
  }
  consumed_ += bytes.size();
}

bool LineFramer::finish(const Sink& sink) {
  if (carry_.empty()) return false;
  // an unterminated line keeps any trailing CR: it was never a terminator
  sink(carry_, carry_offset_);
  carry_.clear();
  return true;
}

}  // namespace loranrec
