#include "cacer/standoff.h"

namespace cacer {
namespace {

bool IsTerminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }
bool IsCloser(char32_t c) {
  return c == U')' || c == U']' || c == U'"' || c == U'\'' || c == 0x2019 || c == 0x201D;
}

}  // namespace

std::vector<Span> SegmentSentences(const NoteText &text) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<Span> out;
  const std::size_t n = text.size();
  std::size_t seg_start = kNone;
  std::size_t seg_end = 0;  // one past the last non-space character seen
  std::size_t line_start = 0;

  auto close = [&]() {
    if (seg_start != kNone) out.push_back(MakeSpan(text, seg_start, seg_end));
    seg_start = kNone;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const char32_t c = text.at(i);
    if (c == U'\n') {
      // Section header: the line's last non-blank character is ':'.
      if (seg_start != kNone && seg_end > line_start && text.at(seg_end - 1) == U':') {
        close();
      }
      // Blank line ahead.
      std::size_t j = i + 1;
      while (j < n && text.at(j) != U'\n' && IsSpace(text.at(j))) ++j;
      if (j < n && text.at(j) == U'\n') close();
      line_start = i + 1;
      continue;
    }
    if (IsSpace(c)) continue;
    if (seg_start == kNone) seg_start = i;
    seg_end = i + 1;
    if (IsTerminal(c)) {
      std::size_t j = i + 1;
      while (j < n && IsCloser(text.at(j))) ++j;
      if (j == n || IsSpace(text.at(j))) {
        seg_end = j;
        i = j - 1;
        close();
      }
    }
  }
  close();
  return out;
}

}  // namespace cacer
