#include "cacer/schema.h"

#include <algorithm>
#include <map>
#include <tuple>

namespace cacer {
namespace {

constexpr std::array<Subtype, 6> kAssertionLabels = {
    Subtype::kPresent,     Subtype::kAbsent,       Subtype::kPossible,
    Subtype::kConditional, Subtype::kHypothetical, Subtype::kNotPatient,
};
constexpr std::array<Subtype, 4> kChangeLabels = {
    Subtype::kWorsening, Subtype::kNoChange, Subtype::kImproving, Subtype::kResolved};
constexpr std::array<Subtype, 3> kSeverityLabels = {Subtype::kMild, Subtype::kModerate,
                                                    Subtype::kSevere};

auto ArgumentKey(const Argument &a) {
  return std::make_tuple(static_cast<int>(a.type), a.span.has_value(),
                         a.span ? a.span->start : 0, a.span ? a.span->end : 0,
                         a.label.has_value(), a.label ? static_cast<int>(*a.label) : -1);
}

bool ArgumentLess(const Argument &a, const Argument &b) {
  return ArgumentKey(a) < ArgumentKey(b);
}

bool EventLess(const Event &a, const Event &b) {
  const auto ka = std::make_tuple(a.trigger.start, a.trigger.end, static_cast<int>(a.type));
  const auto kb = std::make_tuple(b.trigger.start, b.trigger.end, static_cast<int>(b.type));
  if (ka != kb) return ka < kb;
  return std::lexicographical_compare(a.arguments.begin(), a.arguments.end(),
                                      b.arguments.begin(), b.arguments.end(), ArgumentLess);
}

}  // namespace

Span MakeSpan(const NoteText &text, std::size_t start, std::size_t end) {
  return Span{start, end, text.slice(start, end)};
}

ArgumentType OwnerOf(Subtype s) {
  switch (s) {
    case Subtype::kPresent:
    case Subtype::kAbsent:
    case Subtype::kPossible:
    case Subtype::kConditional:
    case Subtype::kHypothetical:
    case Subtype::kNotPatient:
      return ArgumentType::kAssertion;
    case Subtype::kWorsening:
    case Subtype::kNoChange:
    case Subtype::kImproving:
    case Subtype::kResolved:
      return ArgumentType::kChange;
    case Subtype::kMild:
    case Subtype::kModerate:
    case Subtype::kSevere:
      return ArgumentType::kSeverity;
  }
  return ArgumentType::kAssertion;
}

std::span<const Subtype> LabelsFor(ArgumentType t) {
  switch (t) {
    case ArgumentType::kAssertion:
      return kAssertionLabels;
    case ArgumentType::kChange:
      return kChangeLabels;
    case ArgumentType::kSeverity:
      return kSeverityLabels;
    default:
      return {};
  }
}

std::string_view Name(EventType t) {
  return t == EventType::kDrug ? "Drug" : "Problem";
}

std::string_view Name(ArgumentType t) {
  switch (t) {
    case ArgumentType::kAssertion:
      return "Assertion";
    case ArgumentType::kChange:
      return "Change";
    case ArgumentType::kSeverity:
      return "Severity";
    case ArgumentType::kAnatomy:
      return "Anatomy";
    case ArgumentType::kCharacteristics:
      return "Characteristics";
    case ArgumentType::kDuration:
      return "Duration";
    case ArgumentType::kFrequency:
      return "Frequency";
  }
  return "?";
}

std::string_view Name(Subtype s) {
  switch (s) {
    case Subtype::kPresent:
      return "present";
    case Subtype::kAbsent:
      return "absent";
    case Subtype::kPossible:
      return "possible";
    case Subtype::kConditional:
      return "conditional";
    case Subtype::kHypothetical:
      return "hypothetical";
    case Subtype::kNotPatient:
      return "not_patient";
    case Subtype::kWorsening:
      return "worsening";
    case Subtype::kNoChange:
      return "no_change";
    case Subtype::kImproving:
      return "improving";
    case Subtype::kResolved:
      return "resolved";
    case Subtype::kMild:
      return "mild";
    case Subtype::kModerate:
      return "moderate";
    case Subtype::kSevere:
      return "severe";
  }
  return "?";
}

std::string_view Name(RelationType r) {
  switch (r) {
    case RelationType::kAdminFor:
      return "AdminFor";
    case RelationType::kNotAdminBecause:
      return "NotAdminBecause";
    case RelationType::kCauses:
      return "Causes";
    case RelationType::kImproves:
      return "Improves";
    case RelationType::kWorsens:
      return "Worsens";
    case RelationType::kPip:
      return "PIP";
  }
  return "?";
}

std::optional<EventType> ParseEventType(std::string_view s) {
  for (EventType t : kEventTypes) {
    if (Name(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<ArgumentType> ParseArgumentType(std::string_view s) {
  for (ArgumentType t : kArgumentTypes) {
    if (Name(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<RelationType> ParseRelationType(std::string_view s) {
  for (RelationType r : kRelationTypes) {
    if (Name(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<Subtype> ParseSubtype(ArgumentType owner, std::string_view s) {
  for (Subtype label : LabelsFor(owner)) {
    if (Name(label) == s) return label;
  }
  return std::nullopt;
}

const Event *Document::FindEvent(std::string_view id) const {
  for (const Event &e : events) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Document Canonicalize(const Document &doc) {
  Document out = doc;
  for (Event &e : out.events) {
    std::stable_sort(e.arguments.begin(), e.arguments.end(), ArgumentLess);
  }
  std::vector<std::size_t> order(out.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return EventLess(out.events[a], out.events[b]);
  });
  std::map<std::string, std::string> rename;
  std::vector<Event> events;
  events.reserve(order.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    Event e = out.events[order[rank]];
    const std::string fresh = "E" + std::to_string(rank + 1);
    rename.emplace(e.id, fresh);
    e.id = fresh;
    events.push_back(std::move(e));
  }
  out.events = std::move(events);
  for (Relation &r : out.relations) {
    auto h = rename.find(r.head);
    auto t = rename.find(r.tail);
    if (h != rename.end()) r.head = h->second;
    if (t != rename.end()) r.tail = t->second;
  }
  std::sort(out.relations.begin(), out.relations.end(), [](const Relation &a, const Relation &b) {
    return std::make_tuple(static_cast<int>(a.type), a.head.size(), a.head, a.tail.size(),
                           a.tail) < std::make_tuple(static_cast<int>(b.type), b.head.size(),
                                                     b.head, b.tail.size(), b.tail);
  });
  return out;
}

bool EquivalentModuloIds(const Document &a, const Document &b) {
  const Document ca = Canonicalize(a);
  const Document cb = Canonicalize(b);
  return ca.doc_id == cb.doc_id && ca.text == cb.text && ca.sentences == cb.sentences &&
         ca.events == cb.events && ca.relations == cb.relations;
}

}  // namespace cacer
