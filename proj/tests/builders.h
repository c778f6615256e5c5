#ifndef CACER_TESTS_BUILDERS_H_
#define CACER_TESTS_BUILDERS_H_

// Small helpers for hand-built fixtures. Text is assumed ASCII so byte and
// code point offsets agree.

#include <stdexcept>
#include <string>
#include <string_view>

#include "cacer/schema.h"
#include "cacer/standoff.h"

namespace cacer::testing {

inline Document Doc(std::string text, std::string id = "doc") {
  Document d;
  d.doc_id = std::move(id);
  d.text = NoteText(std::move(text));
  d.sentences = SegmentSentences(d.text);
  return d;
}

inline Span Find(const Document &d, std::string_view needle, int nth = 0) {
  std::size_t pos = 0;
  for (int i = 0;; ++i) {
    pos = d.text.str().find(needle, pos);
    if (pos == std::string::npos) throw std::logic_error("fixture text lacks " + std::string(needle));
    if (i == nth) break;
    pos += needle.size();
  }
  return MakeSpan(d.text, pos, pos + needle.size());
}

inline Event &AddEvent(Document &d, std::string id, EventType type, std::string_view trigger,
                       int nth = 0) {
  Event e;
  e.id = std::move(id);
  e.type = type;
  e.trigger = Find(d, trigger, nth);
  if (type == EventType::kProblem) {
    Argument a;
    a.type = ArgumentType::kAssertion;
    a.label = Subtype::kPresent;
    e.arguments.push_back(a);
  }
  d.events.push_back(e);
  return d.events.back();
}

inline Event &Problem(Document &d, std::string id, std::string_view trigger, int nth = 0) {
  return AddEvent(d, std::move(id), EventType::kProblem, trigger, nth);
}

inline Event &Drug(Document &d, std::string id, std::string_view trigger, int nth = 0) {
  return AddEvent(d, std::move(id), EventType::kDrug, trigger, nth);
}

inline void AddSpanArg(const Document &d, Event &e, ArgumentType t, std::string_view text,
                       int nth = 0) {
  Argument a;
  a.type = t;
  a.span = Find(d, text, nth);
  e.arguments.push_back(a);
}

inline void Relate(Document &d, RelationType t, std::string head, std::string tail) {
  d.relations.push_back(Relation{t, std::move(head), std::move(tail)});
}

}  // namespace cacer::testing

#endif  // CACER_TESTS_BUILDERS_H_
