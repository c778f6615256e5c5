#ifndef CACER_ERROR_H_
#define CACER_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace cacer {

// Failure raised by toolkit operations. `code` is a stable machine-readable
// identifier such as "MALFORMED_LINE" or "WINDOW_TOO_LONG"; `what()` carries
// the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

// Standoff parse failure with the offending 1-based line number (0 when the
// failure is not tied to a single line).
class StandoffError : public Error {
 public:
  StandoffError(std::string code, int line, const std::string &detail)
      : Error(std::move(code),
              (line > 0 ? "line " + std::to_string(line) + ": " : "") + detail),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace cacer

#endif  // CACER_ERROR_H_
