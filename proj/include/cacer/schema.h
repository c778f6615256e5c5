#ifndef CACER_SCHEMA_H_
#define CACER_SCHEMA_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cacer/text.h"

namespace cacer {

// Contiguous character interval [start, end) in code points, plus the
// surface text it covers.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  std::size_t length() const { return end - start; }
  bool operator==(const Span &) const = default;
};

inline bool Overlaps(const Span &a, const Span &b) {
  return a.start < b.end && b.start < a.end;
}

inline std::size_t OverlapLength(const Span &a, const Span &b) {
  const std::size_t lo = a.start > b.start ? a.start : b.start;
  const std::size_t hi = a.end < b.end ? a.end : b.end;
  return hi > lo ? hi - lo : 0;
}

// Builds a span over `text` and fills in its surface string.
Span MakeSpan(const NoteText &text, std::size_t start, std::size_t end);

enum class EventType { kProblem, kDrug };

enum class ArgumentType {
  kAssertion,
  kChange,
  kSeverity,
  kAnatomy,
  kCharacteristics,
  kDuration,
  kFrequency,
};

inline constexpr std::array<EventType, 2> kEventTypes = {EventType::kDrug,
                                                         EventType::kProblem};

// Canonical rendering order for a Problem's arguments.
inline constexpr std::array<ArgumentType, 7> kArgumentTypes = {
    ArgumentType::kAssertion,       ArgumentType::kAnatomy,
    ArgumentType::kDuration,        ArgumentType::kFrequency,
    ArgumentType::kCharacteristics, ArgumentType::kChange,
    ArgumentType::kSeverity,
};

// Assertion, Change and Severity carry a subtype label; the rest are spans.
constexpr bool IsLabeled(ArgumentType t) {
  return t == ArgumentType::kAssertion || t == ArgumentType::kChange ||
         t == ArgumentType::kSeverity;
}

// Subtype labels across all labeled argument types. The vocabulary of each
// argument type is fixed; see LabelsFor().
enum class Subtype {
  kPresent,
  kAbsent,
  kPossible,
  kConditional,
  kHypothetical,
  kNotPatient,
  kWorsening,
  kNoChange,
  kImproving,
  kResolved,
  kMild,
  kModerate,
  kSevere,
};

ArgumentType OwnerOf(Subtype s);
std::span<const Subtype> LabelsFor(ArgumentType t);

enum class RelationType {
  kAdminFor,
  kNotAdminBecause,
  kCauses,
  kImproves,
  kWorsens,
  kPip,
};

inline constexpr std::array<RelationType, 6> kRelationTypes = {
    RelationType::kAdminFor, RelationType::kNotAdminBecause,
    RelationType::kCauses,   RelationType::kImproves,
    RelationType::kWorsens,  RelationType::kPip,
};

// Head event type: Drug for all but PIP. Tails are always Problems.
constexpr EventType HeadTypeOf(RelationType r) {
  return r == RelationType::kPip ? EventType::kProblem : EventType::kDrug;
}
constexpr EventType TailTypeOf(RelationType) { return EventType::kProblem; }

std::string_view Name(EventType t);
std::string_view Name(ArgumentType t);
std::string_view Name(Subtype s);
std::string_view Name(RelationType r);

std::optional<EventType> ParseEventType(std::string_view s);
std::optional<ArgumentType> ParseArgumentType(std::string_view s);
std::optional<RelationType> ParseRelationType(std::string_view s);
// Looks a label up in the vocabulary of `owner` only.
std::optional<Subtype> ParseSubtype(ArgumentType owner, std::string_view s);

struct Argument {
  ArgumentType type = ArgumentType::kAnatomy;
  std::optional<Span> span;     // required for span-only arguments
  std::optional<Subtype> label;  // present iff the type is labeled

  bool operator==(const Argument &) const = default;
};

struct Event {
  std::string id;
  EventType type = EventType::kProblem;
  Span trigger;
  std::vector<Argument> arguments;

  bool operator==(const Event &) const = default;
};

struct Relation {
  RelationType type = RelationType::kAdminFor;
  std::string head;  // event id
  std::string tail;  // event id

  bool operator==(const Relation &) const = default;
};

struct Document {
  std::string doc_id;
  NoteText text;
  std::vector<Span> sentences;
  std::vector<Event> events;
  std::vector<Relation> relations;
  std::string source = "gold";

  const Event *FindEvent(std::string_view id) const;
};

// Canonical form used for "equal modulo id renaming": events sorted by
// (trigger start, trigger end, type, arguments), renamed E1.., arguments
// sorted, relations rewritten to the new ids and sorted.
Document Canonicalize(const Document &doc);
bool EquivalentModuloIds(const Document &a, const Document &b);

}  // namespace cacer

#endif  // CACER_SCHEMA_H_
