#ifndef CACER_GLM_CODEC_H_
#define CACER_GLM_CODEC_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cacer/context_window.h"
#include "cacer/schema.h"

namespace cacer {

// A recoverable problem found while decoding untrusted model output.
struct DecodeIssue {
  std::string code;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Event extraction format.
//
//   <Problem> pain <Assertion> present <Anatomy> back <s> neck [SEP] <Drug> x
//
// Events are ordered by trigger position and separated by [SEP]; spans of the
// same argument type are joined with <s>; a sentence without events renders
// as "None". Arguments appear in the order Assertion, Anatomy, Duration,
// Frequency, Characteristics, Change, Severity.
// ---------------------------------------------------------------------------

// Throws Error("EVENT_OUTSIDE_SENTENCE") if a trigger is not inside
// `sentence`. Arguments whose spans fall outside the sentence are left out.
std::string EncodeEvents(const Span &sentence, std::span<const Event> events);

struct DecodedEvents {
  std::vector<Event> events;
  std::vector<DecodeIssue> issues;
};

// Never throws on malformed output. Every span in the result occurs verbatim
// in `sentence` at the reported offsets. Triggers resolve left to right: the
// first occurrence at or after the previous trigger (whole-word matches
// preferred). Argument spans resolve to the occurrence nearest their trigger.
// Decoded events get ids "<id_prefix>1", "<id_prefix>2", ...
DecodedEvents DecodeEvents(const Span &sentence, std::string_view output,
                           std::string_view id_prefix = "D");

// Instruction prompt for one sentence.
std::string RenderEventPrompt(std::string_view sentence_text);

// ---------------------------------------------------------------------------
// Relation extraction, marker format. Input wraps triggers in the window text
// as <Drug>...</Drug> / <Problem>...</Problem>. Output has one relation type
// per line, "<Type>: <head> ... <tail>", instances separated by [SEP], and
// "None" when there are no relations.
// ---------------------------------------------------------------------------

struct MarkerInput {
  std::string text;
  std::vector<DecodeIssue> issues;
};

// Overlapping triggers are reported as OVERLAPPING_TRIGGERS; the outermost
// (earliest, then longest) trigger keeps its markers.
MarkerInput EncodeMarkerInput(const ContextWindow &window);
std::string StripMarkers(std::string_view marked);
std::string RenderMarkerPrompt(const ContextWindow &window);

// Gold target: relations whose endpoints both lie in the window.
std::string EncodeMarkerOutput(const ContextWindow &window, std::span<const Relation> relations);

struct DecodedRelations {
  std::vector<Relation> relations;
  std::vector<DecodeIssue> issues;
};

// Mentions resolve to window events by exact trigger text (case-insensitive
// fallback); when a mention is ambiguous the closest head/tail pair wins.
DecodedRelations DecodeMarkerOutput(std::string_view output, const ContextWindow &window);

// ---------------------------------------------------------------------------
// Relation extraction, multiple-choice QA format.
// ---------------------------------------------------------------------------

enum class PairKind { kDrugProblem, kProblemProblem };

struct QaPrompt {
  std::string head;  // event ids
  std::string tail;
  PairKind kind = PairKind::kDrugProblem;
  std::string window_text;
  std::vector<std::string> options;  // "(A) ..." lines as rendered
  std::string rendered;
};

// Throws Error("INVALID_PAIR_TYPES") unless (Drug, Problem) or
// (Problem, Problem).
QaPrompt BuildQaPrompt(const Event &head, const Event &tail, const ContextWindow &window);

// Option letter -> relation for Drug-Problem prompts (A..F). The default is
// A AdminFor, B NotAdminBecause, C Worsens, D Causes, E Improves, F none.
struct QaMapping {
  std::array<std::optional<RelationType>, 6> drug_problem;

  static QaMapping Default();
};

// First "(X)" or "[X]" with X an allowed letter, else a bare leading letter
// (after stripping punctuation and an optional "Answer:"/"Option" prefix).
std::optional<char> ExtractAnswerLetter(std::string_view answer, std::string_view letters);

// Problem-Problem: A -> PIP(head, tail), B -> PIP(tail, head), C -> none.
// Throws Error("UNPARSEABLE_ANSWER") when no option letter can be found.
std::optional<Relation> ParseQaAnswer(std::string_view answer, PairKind kind, const Event &head,
                                      const Event &tail, const QaMapping &mapping = QaMapping::Default());

// Gold answer letter for a pair given the document's relations.
char GoldQaLetter(PairKind kind, const Event &head, const Event &tail,
                  std::span<const Relation> relations, const QaMapping &mapping = QaMapping::Default());

}  // namespace cacer

#endif  // CACER_GLM_CODEC_H_
