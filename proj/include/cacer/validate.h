#ifndef CACER_VALIDATE_H_
#define CACER_VALIDATE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "cacer/schema.h"

namespace cacer {

enum class Severity { kError, kWarning };

std::string_view Name(Severity s);

// One schema violation. `code` is machine-readable (DRUG_HAS_ARGUMENT,
// CARDINALITY, ...); `element` is the id of the offending event or relation.
struct Violation {
  Severity severity = Severity::kError;
  std::string code;
  std::string element;
  std::string detail;

  bool operator==(const Violation &) const = default;
  bool operator<(const Violation &o) const;
};

// Returns every schema violation in `doc`; empty iff schema-valid. The result
// is sorted, so permuting event or argument order yields the same list.
std::vector<Violation> ValidateDocument(const Document &doc);

bool HasErrors(const std::vector<Violation> &violations);

struct SentenceLookup {
  std::size_t ordinal = 0;
  // Set when the span is not fully inside the returned sentence.
  bool straddles = false;
};

// Sentence containing span.start (the nearest preceding sentence when
// span.start falls between sentences). Throws Error("OUT_OF_BOUNDS") when the
// span exceeds the note text or the document has no sentences.
SentenceLookup SentenceIndex(const Document &doc, const Span &span);

}  // namespace cacer

#endif  // CACER_VALIDATE_H_
