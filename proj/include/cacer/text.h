#ifndef CACER_TEXT_H_
#define CACER_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cacer {

// UTF-8 note text addressed by Unicode scalar value offsets, which is how
// annotation tools record character positions. The UTF-8 bytes are kept
// exactly as read; no normalization ever happens.
class NoteText {
 public:
  NoteText() : cp_to_byte_{0} {}
  // Throws Error("INVALID_UTF8") on malformed input.
  explicit NoteText(std::string utf8);

  const std::string &str() const { return utf8_; }
  // Length in code points.
  std::size_t size() const { return cp_to_byte_.size() - 1; }
  bool empty() const { return size() == 0; }

  // Substring [start, end) in code points. Requires start <= end <= size().
  std::string slice(std::size_t start, std::size_t end) const;
  std::string_view slice_view(std::size_t start, std::size_t end) const;
  char32_t at(std::size_t cp) const;

  std::size_t byte_offset(std::size_t cp) const { return cp_to_byte_[cp]; }
  // Code point index of a byte offset, or nullopt if the byte offset falls
  // inside a multi-byte sequence.
  std::optional<std::size_t> code_point_at_byte(std::size_t byte) const;

  bool operator==(const NoteText &other) const { return utf8_ == other.utf8_; }

 private:
  std::string utf8_;
  std::vector<std::size_t> cp_to_byte_;
};

// Number of code points in a UTF-8 string; invalid bytes count as one each.
std::size_t CodePointLength(std::string_view utf8);

bool IsSpace(char32_t c);
bool IsWordChar(char32_t c);

}  // namespace cacer

#endif  // CACER_TEXT_H_
