#include "cacer/validate.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "cacer/error.h"

namespace cacer {
namespace {

std::string RelationElement(const Relation &r) {
  return std::string(Name(r.type)) + ":" + r.head + "->" + r.tail;
}

// Index of the sentence fully containing [start, end), if any.
std::optional<std::size_t> ContainingSentence(const std::vector<Span> &sentences,
                                              std::size_t start, std::size_t end) {
  auto it = std::upper_bound(sentences.begin(), sentences.end(), start,
                             [](std::size_t pos, const Span &s) { return pos < s.start; });
  if (it == sentences.begin()) return std::nullopt;
  --it;
  if (start >= it->start && end <= it->end) {
    return static_cast<std::size_t>(it - sentences.begin());
  }
  return std::nullopt;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

class Validator {
 public:
  explicit Validator(const Document &doc) : doc_(doc) {}

  std::vector<Violation> Run() {
    CheckSentences();
    CheckEventIds();
    for (const Event &e : doc_.events) CheckEvent(e);
    CheckDuplicateTriggers();
    CheckRelations();
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void Add(Severity sev, std::string code, std::string element, std::string detail) {
    out_.push_back({sev, std::move(code), std::move(element), std::move(detail)});
  }

  bool CheckSpan(const Span &s, const std::string &element, std::string_view what) {
    if (s.start >= s.end || s.end > doc_.text.size()) {
      Add(Severity::kError, "SPAN_OUT_OF_BOUNDS", element,
          std::string(what) + " [" + std::to_string(s.start) + "," + std::to_string(s.end) +
              ") outside note of length " + std::to_string(doc_.text.size()));
      return false;
    }
    if (doc_.text.slice_view(s.start, s.end) != s.text) {
      Add(Severity::kError, "SPAN_TEXT_MISMATCH", element,
          std::string(what) + " text '" + s.text + "' != note substring");
      return false;
    }
    return true;
  }

  void CheckSentences() {
    const auto &ss = doc_.sentences;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const bool bad_bounds = ss[i].start >= ss[i].end || ss[i].end > doc_.text.size();
      const bool bad_order = i > 0 && ss[i].start < ss[i - 1].end;
      if (bad_bounds || bad_order) {
        Add(Severity::kError, "SENTENCES_INVALID", doc_.doc_id,
            "sentence " + std::to_string(i) + " is out of bounds or overlaps its predecessor");
      }
    }
  }

  void CheckEventIds() {
    std::map<std::string, int> seen;
    for (const Event &e : doc_.events) ++seen[e.id];
    for (const auto &[id, n] : seen) {
      if (n > 1) {
        Add(Severity::kError, "DUPLICATE_ID", id, std::to_string(n) + " events share this id");
      }
    }
  }

  void CheckEvent(const Event &e) {
    std::optional<std::size_t> trigger_sentence;
    if (CheckSpan(e.trigger, e.id, "trigger")) {
      trigger_sentence = ContainingSentence(doc_.sentences, e.trigger.start, e.trigger.end);
      if (!trigger_sentence) {
        Add(Severity::kError, "TRIGGER_SENTENCE", e.id,
            "trigger is not inside exactly one sentence");
      }
    }

    if (e.type == EventType::kDrug) {
      if (!e.arguments.empty()) {
        Add(Severity::kError, "DRUG_HAS_ARGUMENT", e.id,
            "Drug event carries " + std::to_string(e.arguments.size()) + " argument(s)");
      }
      return;
    }

    std::map<ArgumentType, int> count;
    for (const Argument &a : e.arguments) {
      ++count[a.type];
      const std::string what = std::string(Name(a.type)) + " argument";
      if (IsLabeled(a.type)) {
        if (!a.label) {
          Add(Severity::kError, "LABEL_MISSING", e.id, what + " has no subtype label");
        } else if (OwnerOf(*a.label) != a.type) {
          Add(Severity::kError, "LABEL_NOT_IN_VOCABULARY", e.id,
              what + " label '" + std::string(Name(*a.label)) + "'");
        }
      } else {
        if (a.label) {
          Add(Severity::kError, "LABEL_ON_SPAN_ONLY", e.id, what + " carries a subtype label");
        }
        if (!a.span) {
          Add(Severity::kError, "SPAN_MISSING", e.id, what + " has no span");
        }
      }
      if (a.span && CheckSpan(*a.span, e.id, what) && trigger_sentence) {
        auto arg_sentence = ContainingSentence(doc_.sentences, a.span->start, a.span->end);
        if (arg_sentence != trigger_sentence) {
          Add(Severity::kWarning, "CROSS_SENTENCE_ARGUMENT", e.id,
              what + " is not in the trigger's sentence");
        }
      }
    }

    auto cardinality = [&](ArgumentType t, int lo, int hi, Severity sev) {
      const int found = count[t];
      if (found < lo) {
        Add(sev, "CARDINALITY", e.id,
            "CARDINALITY(" + std::string(Name(t)) + ", min=" + std::to_string(lo) +
                ", found=" + std::to_string(found) + ")");
      } else if (found > hi) {
        Add(sev, "CARDINALITY", e.id,
            "CARDINALITY(" + std::string(Name(t)) + ", max=" + std::to_string(hi) +
                ", found=" + std::to_string(found) + ")");
      }
    };
    cardinality(ArgumentType::kAssertion, 1, 1, Severity::kError);
    cardinality(ArgumentType::kChange, 0, 1, Severity::kError);
    cardinality(ArgumentType::kSeverity, 0, 1, Severity::kError);
    cardinality(ArgumentType::kAnatomy, 0, 1, Severity::kWarning);
    cardinality(ArgumentType::kDuration, 0, 1, Severity::kWarning);
    cardinality(ArgumentType::kFrequency, 0, 1, Severity::kWarning);
  }

  void CheckDuplicateTriggers() {
    std::map<std::tuple<int, std::size_t, std::size_t>, std::vector<const Event *>> groups;
    for (const Event &e : doc_.events) {
      groups[{static_cast<int>(e.type), e.trigger.start, e.trigger.end}].push_back(&e);
    }
    for (const auto &[key, members] : groups) {
      if (members.size() < 2) continue;
      for (const Event *e : members) {
        Add(Severity::kWarning, "DUPLICATE_TRIGGER", e->id,
            std::to_string(members.size()) + " events share this trigger span");
      }
    }
  }

  // (sentence distance, character distance) between two triggers.
  std::pair<std::size_t, std::size_t> Distance(const Event &a, const Event &b) const {
    auto sa = ContainingSentence(doc_.sentences, a.trigger.start, a.trigger.end);
    auto sb = ContainingSentence(doc_.sentences, b.trigger.start, b.trigger.end);
    const std::size_t sent = (sa && sb) ? (*sa > *sb ? *sa - *sb : *sb - *sa) : 0;
    const std::size_t chars = a.trigger.start > b.trigger.start
                                  ? a.trigger.start - b.trigger.start
                                  : b.trigger.start - a.trigger.start;
    return {sent, chars};
  }

  // A relation should link the closest mentions of its head and tail texts.
  bool CloserMentionExists(const Event &moving, const Event &fixed) const {
    const auto current = Distance(moving, fixed);
    const std::string text = Lower(moving.trigger.text);
    for (const Event &other : doc_.events) {
      if (&other == &moving || &other == &fixed || other.type != moving.type) continue;
      if (Lower(other.trigger.text) != text) continue;
      if (Distance(other, fixed) < current) return true;
    }
    return false;
  }

  void CheckRelations() {
    std::map<std::tuple<int, std::string, std::string>, int> seen;
    for (const Relation &r : doc_.relations) {
      const std::string element = RelationElement(r);
      if (++seen[{static_cast<int>(r.type), r.head, r.tail}] == 2) {
        Add(Severity::kWarning, "DUPLICATE_RELATION", element, "relation repeated");
      }
      const Event *head = doc_.FindEvent(r.head);
      const Event *tail = doc_.FindEvent(r.tail);
      if (!head || !tail) {
        Add(Severity::kError, "DANGLING_RELATION", element, "endpoint event not in document");
        continue;
      }
      if (r.head == r.tail) {
        Add(Severity::kError, "SELF_RELATION", element, "head and tail are the same event");
        continue;
      }
      if (head->type != HeadTypeOf(r.type) || tail->type != TailTypeOf(r.type)) {
        Add(Severity::kError, "RELATION_TYPING", element,
            std::string(Name(r.type)) + " requires " + std::string(Name(HeadTypeOf(r.type))) +
                " -> " + std::string(Name(TailTypeOf(r.type))) + ", found " +
                std::string(Name(head->type)) + " -> " + std::string(Name(tail->type)));
        continue;
      }
      if (CloserMentionExists(*head, *tail) || CloserMentionExists(*tail, *head)) {
        Add(Severity::kWarning, "NOT_CLOSEST_PAIR", element,
            "a closer mention with the same trigger text exists");
      }
    }
  }

  const Document &doc_;
  std::vector<Violation> out_;
};

}  // namespace

std::string_view Name(Severity s) { return s == Severity::kError ? "error" : "warning"; }

bool Violation::operator<(const Violation &o) const {
  return std::tie(severity, code, element, detail) <
         std::tie(o.severity, o.code, o.element, o.detail);
}

std::vector<Violation> ValidateDocument(const Document &doc) { return Validator(doc).Run(); }

bool HasErrors(const std::vector<Violation> &violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation &v) { return v.severity == Severity::kError; });
}

SentenceLookup SentenceIndex(const Document &doc, const Span &span) {
  if (span.end > doc.text.size() || span.start > span.end) {
    throw Error("OUT_OF_BOUNDS", "span [" + std::to_string(span.start) + "," +
                                     std::to_string(span.end) + ") exceeds note length " +
                                     std::to_string(doc.text.size()));
  }
  const auto &ss = doc.sentences;
  if (ss.empty()) throw Error("OUT_OF_BOUNDS", "document has no sentences");
  auto it = std::upper_bound(ss.begin(), ss.end(), span.start,
                             [](std::size_t pos, const Span &s) { return pos < s.start; });
  const std::size_t ordinal = it == ss.begin() ? 0 : static_cast<std::size_t>(it - ss.begin()) - 1;
  const Span &s = ss[ordinal];
  return {ordinal, !(span.start >= s.start && span.end <= s.end)};
}

}  // namespace cacer
