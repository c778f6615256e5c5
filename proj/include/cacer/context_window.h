#ifndef CACER_CONTEXT_WINDOW_H_
#define CACER_CONTEXT_WINDOW_H_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cacer/schema.h"

namespace cacer {

// Text -> token count. Implementations must be monotone: the count of a
// concatenation is at least the count of either part.
using Tokenizer = std::function<std::size_t(std::string_view)>;

// Default stand-in for a subword tokenizer: whitespace-separated words, each
// contributing ceil(code points / 6) units.
std::size_t EstimateSubwordTokens(std::string_view text);

struct WindowLimits {
  std::size_t max_sentences = 5;
  std::size_t max_tokens = 400;
};

struct WindowEvent {
  Event event;
  std::size_t sentence = 0;
};

// A contiguous sentence range [first, last] of one note, self-contained so it
// can outlive the Document it was cut from. Only raw window text is counted
// toward token_count; markers and prompt text are not.
struct ContextWindow {
  std::string doc_id;
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t start = 0;  // character offset of the first sentence
  std::size_t end = 0;    // character offset one past the last sentence
  std::string text;
  std::vector<WindowEvent> events;  // triggers inside the range, offset order
  std::size_t token_count = 0;
  bool intra_sentence = false;

  std::size_t sentence_count() const { return last - first + 1; }
  const WindowEvent *Find(std::string_view event_id) const;
};

// Sentence ordinal of every event's trigger (by trigger start), keyed by id.
std::map<std::string, std::size_t> TriggerSentences(const Document &doc);

// Window over an explicit sentence range; no limit checks.
ContextWindow MakeWindow(const Document &doc, std::size_t first, std::size_t last,
                         const Tokenizer &tok = EstimateSubwordTokens);

// Minimal window containing both triggers. Throws Error("WINDOW_TOO_LONG") or
// Error("WINDOW_TOO_MANY_TOKENS") when a limit is exceeded.
ContextWindow BuildWindow(const Document &doc, const Event &head, const Event &tail,
                          const Tokenizer &tok = EstimateSubwordTokens,
                          const WindowLimits &limits = {});

struct Candidate {
  std::string head;
  std::string tail;
  ContextWindow window;
};

struct CandidateSet {
  std::vector<Candidate> pairs;
  std::size_t excluded_too_long = 0;
  std::size_t excluded_too_many_tokens = 0;
};

// Every ordered (Drug, Problem) and (Problem, Problem) pair, head != tail,
// whose minimal window is within limits. Ordered by the (head, tail) trigger
// positions, so the output does not depend on event list order.
CandidateSet EnumerateCandidatePairs(const Document &doc,
                                     const Tokenizer &tok = EstimateSubwordTokens,
                                     const WindowLimits &limits = {});
// OpenMP-parallel over documents; results in input order.
std::vector<CandidateSet> EnumerateCandidatePairs(std::span<const Document> docs,
                                                  const Tokenizer &tok = EstimateSubwordTokens,
                                                  const WindowLimits &limits = {});
// Serial reference for the batch version.
std::vector<CandidateSet> EnumerateCandidatePairsSerial(
    std::span<const Document> docs, const Tokenizer &tok = EstimateSubwordTokens,
    const WindowLimits &limits = {});

// Inference-time deduplication: a prediction from `window` counts only if the
// head sits in the first sentence and the tail in the last, or vice versa, or
// the window is a single sentence. False when an endpoint is not in the window.
bool PassesValidityFilter(const ContextWindow &window, const Relation &relation);

struct CoverageCounts {
  std::size_t total = 0;
  std::size_t within_limits = 0;
  std::size_t intra_sentence = 0;

  CoverageCounts &operator+=(const CoverageCounts &o);
};

struct CoverageStats {
  CoverageCounts overall;
  std::map<RelationType, CoverageCounts> by_type;

  double coverage() const;
  double intra_fraction() const;
  CoverageStats &operator+=(const CoverageStats &o);
};

double Fraction(std::size_t num, std::size_t den);

CoverageStats CoverageReport(std::span<const Document> docs,
                             const Tokenizer &tok = EstimateSubwordTokens,
                             const WindowLimits &limits = {});

}  // namespace cacer

#endif  // CACER_CONTEXT_WINDOW_H_
