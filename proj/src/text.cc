#include "cacer/text.h"

#include <algorithm>

#include "cacer/error.h"

namespace cacer {
namespace {

// Returns the length of the UTF-8 sequence starting at `i`, or 0 if invalid.
std::size_t SequenceLength(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len;
  char32_t min;
  if (b0 < 0x80) return 1;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  char32_t cp = b0 & (0x7F >> len);
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

}  // namespace

NoteText::NoteText(std::string utf8) : utf8_(std::move(utf8)) {
  cp_to_byte_.reserve(utf8_.size() + 1);
  std::size_t i = 0;
  while (i < utf8_.size()) {
    const std::size_t len = SequenceLength(utf8_, i);
    if (len == 0) {
      throw Error("INVALID_UTF8", "bad byte sequence at offset " + std::to_string(i));
    }
    cp_to_byte_.push_back(i);
    i += len;
  }
  cp_to_byte_.push_back(utf8_.size());
}

std::string NoteText::slice(std::size_t start, std::size_t end) const {
  return std::string(slice_view(start, end));
}

std::string_view NoteText::slice_view(std::size_t start, std::size_t end) const {
  const std::size_t b = cp_to_byte_[start];
  return std::string_view(utf8_).substr(b, cp_to_byte_[end] - b);
}

char32_t NoteText::at(std::size_t cp) const {
  const std::size_t b = cp_to_byte_[cp];
  const std::size_t len = cp_to_byte_[cp + 1] - b;
  const auto b0 = static_cast<unsigned char>(utf8_[b]);
  if (len == 1) return b0;
  char32_t c = b0 & (0x7F >> len);
  for (std::size_t k = 1; k < len; ++k) {
    c = (c << 6) | (static_cast<unsigned char>(utf8_[b + k]) & 0x3F);
  }
  return c;
}

std::optional<std::size_t> NoteText::code_point_at_byte(std::size_t byte) const {
  auto it = std::lower_bound(cp_to_byte_.begin(), cp_to_byte_.end(), byte);
  if (it == cp_to_byte_.end() || *it != byte) return std::nullopt;
  return static_cast<std::size_t>(it - cp_to_byte_.begin());
}

std::size_t CodePointLength(std::string_view utf8) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    const std::size_t len = SequenceLength(utf8, i);
    i += len == 0 ? 1 : len;
    ++n;
  }
  return n;
}

bool IsSpace(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0xA0 || c == 0x2028 || c == 0x2029;
}

bool IsWordChar(char32_t c) {
  if (c >= 0x80) return true;
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9') || c == U'_';
}

}  // namespace cacer
