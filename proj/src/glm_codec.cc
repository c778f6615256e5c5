#include "cacer/glm_codec.h"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "cacer/error.h"
#include "cacer/resources.h"

namespace cacer {
namespace {

constexpr std::string_view kSep = "[SEP]";

std::string_view Trim(std::string_view s) {
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitOn(std::string_view s, std::string_view delim) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = s.find(delim, pos);
    if (hit == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, hit - pos));
    pos = hit + delim.size();
  }
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool Within(const Span &inner, const Span &outer) {
  return inner.start >= outer.start && inner.end <= outer.end;
}

// ----- span lookup inside one sentence --------------------------------------

struct Occurrence {
  std::size_t start;  // code points, relative to the sentence
  std::size_t end;
};

class SentenceIndexer {
 public:
  explicit SentenceIndexer(const Span &sentence) : sentence_(sentence), text_(sentence.text) {}

  // Code-point-aligned occurrences of `needle`, whole-word ones if any exist.
  std::vector<Occurrence> Find(std::string_view needle) const {
    std::vector<Occurrence> all;
    std::vector<Occurrence> words;
    if (needle.empty()) return all;
    const std::string &hay = text_.str();
    std::size_t pos = hay.find(needle);
    while (pos != std::string::npos) {
      auto s = text_.code_point_at_byte(pos);
      auto e = text_.code_point_at_byte(pos + needle.size());
      if (s && e) {
        all.push_back({*s, *e});
        const bool left = *s == 0 || !IsWordChar(text_.at(*s - 1)) || !IsWordChar(text_.at(*s));
        const bool right =
            *e == text_.size() || !IsWordChar(text_.at(*e)) || !IsWordChar(text_.at(*e - 1));
        if (left && right) words.push_back({*s, *e});
      }
      pos = hay.find(needle, pos + 1);
    }
    return words.empty() ? all : words;
  }

  Span ToSpan(const Occurrence &o) const {
    return Span{sentence_.start + o.start, sentence_.start + o.end, text_.slice(o.start, o.end)};
  }

 private:
  const Span &sentence_;
  NoteText text_;
};

// ----- event output lexer ---------------------------------------------------

struct Field {
  std::string tag;                  // empty for text before any tag
  std::vector<std::string> values;  // split on <s>
};

bool IsTagName(std::string_view s) {
  if (s.empty() || s.size() > 32) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  });
}

std::vector<Field> LexChunk(std::string_view chunk) {
  std::vector<Field> fields(1);
  std::string current;
  auto flush_value = [&]() {
    fields.back().values.emplace_back(Trim(current));
    current.clear();
  };
  std::size_t i = 0;
  while (i < chunk.size()) {
    if (chunk[i] == '<') {
      const std::size_t close = chunk.find('>', i + 1);
      if (close != std::string_view::npos) {
        const std::string_view name = chunk.substr(i + 1, close - i - 1);
        if (IsTagName(name)) {
          flush_value();
          if (name != "s") fields.push_back(Field{std::string(name), {}});
          i = close + 1;
          continue;
        }
      }
    }
    current += chunk[i++];
  }
  flush_value();
  // Drop empty values produced by adjacent tags.
  for (Field &f : fields) {
    f.values.erase(std::remove_if(f.values.begin(), f.values.end(),
                                  [](const std::string &v) { return v.empty(); }),
                   f.values.end());
  }
  return fields;
}

std::optional<Subtype> ParseLabelLenient(ArgumentType type, std::string_view value) {
  const std::string v = Lower(Trim(value));
  if (auto s = ParseSubtype(type, v)) return s;
  // Past-tense variants used in the annotation guideline.
  if (type == ArgumentType::kChange) {
    if (v == "improved") return Subtype::kImproving;
    if (v == "worsened") return Subtype::kWorsening;
    if (v == "no change") return Subtype::kNoChange;
  }
  if (type == ArgumentType::kAssertion && v == "not patient") return Subtype::kNotPatient;
  return std::nullopt;
}

class EventDecoder {
 public:
  EventDecoder(const Span &sentence, std::string_view id_prefix)
      : index_(sentence), id_prefix_(id_prefix) {}

  DecodedEvents Run(std::string_view output) {
    const std::string_view trimmed = Trim(output);
    if (trimmed.empty()) {
      Issue("EMPTY_OUTPUT", "no text to decode");
      return std::move(out_);
    }
    if (trimmed == "None") return std::move(out_);
    for (std::string_view chunk : SplitOn(trimmed, kSep)) {
      chunk = Trim(chunk);
      if (chunk.empty() || chunk == "None") continue;
      DecodeChunk(chunk);
    }
    return std::move(out_);
  }

 private:
  void Issue(std::string code, std::string detail) {
    out_.issues.push_back({std::move(code), std::move(detail)});
  }

  void DecodeChunk(std::string_view chunk) {
    std::vector<Field> fields = LexChunk(chunk);
    if (!fields.front().values.empty()) {
      Issue("STRAY_TEXT", "text before the first tag: '" + fields.front().values.front() + "'");
    }
    std::optional<std::size_t> open;  // index of the trigger field
    std::vector<const Field *> args;
    auto finish = [&]() {
      if (open) Finish(fields[*open], args);
      open.reset();
      args.clear();
    };
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const Field &f = fields[i];
      if (ParseEventType(f.tag)) {
        finish();
        open = i;
      } else if (ParseArgumentType(f.tag)) {
        if (!open) {
          Issue("MISSING_TRIGGER", "<" + f.tag + "> before any trigger");
        } else {
          args.push_back(&f);
        }
      } else {
        Issue("UNKNOWN_TAG", "<" + f.tag + "> skipped");
      }
    }
    finish();
  }

  std::optional<Span> ResolveTrigger(const std::string &text) {
    std::vector<Occurrence> occ = index_.Find(text);
    if (occ.empty()) return std::nullopt;
    const Occurrence *pick = nullptr;
    const Occurrence *repeat = nullptr;  // same span as the previous trigger
    for (const Occurrence &o : occ) {
      if (o.start < anchor_) continue;
      if (last_trigger_ && o.start == last_trigger_->start && o.end == last_trigger_->end) {
        if (!repeat) repeat = &o;
        continue;
      }
      pick = &o;
      break;
    }
    if (!pick) pick = repeat;
    if (!pick) {
      pick = &occ.front();
      Issue("SPAN_OUT_OF_ORDER", "trigger '" + text + "' found only before the previous trigger");
    }
    anchor_ = pick->start;
    last_trigger_ = *pick;
    return index_.ToSpan(*pick);
  }

  std::optional<Span> ResolveArgument(const std::string &text, const Span &trigger,
                                      const std::vector<Span> &taken) {
    const std::vector<Occurrence> occ = index_.Find(text);
    std::optional<Span> best;
    std::tuple<int, std::size_t, std::size_t> best_key{};
    for (const Occurrence &o : occ) {
      Span s = index_.ToSpan(o);
      if (std::find(taken.begin(), taken.end(), s) != taken.end()) continue;
      const bool overlap = Overlaps(s, trigger);
      const std::size_t gap = overlap                    ? 0
                              : s.end <= trigger.start ? trigger.start - s.end
                                                       : s.start - trigger.end;
      const auto key = std::make_tuple(overlap ? 1 : 0, gap, s.start);
      if (!best || key < best_key) {
        best = std::move(s);
        best_key = key;
      }
    }
    return best;
  }

  void Finish(const Field &trigger_field, const std::vector<const Field *> &args) {
    const EventType type = *ParseEventType(trigger_field.tag);
    if (trigger_field.values.empty()) {
      Issue("EMPTY_SPAN", "<" + trigger_field.tag + "> without trigger text");
      return;
    }
    if (trigger_field.values.size() > 1) {
      Issue("MULTIPLE_TRIGGER_SPANS", "only the first trigger span is kept");
    }
    const std::string &trigger_text = trigger_field.values.front();
    auto trigger = ResolveTrigger(trigger_text);
    if (!trigger) {
      Issue("SPAN_NOT_FOUND", "trigger '" + trigger_text + "' does not occur in the sentence");
      return;
    }
    Event e;
    e.id = id_prefix_ + std::to_string(out_.events.size() + 1);
    e.type = type;
    e.trigger = *trigger;
    if (type == EventType::kDrug && !args.empty()) {
      Issue("DRUG_HAS_ARGUMENT", std::to_string(args.size()) + " argument(s) dropped from Drug");
      out_.events.push_back(std::move(e));
      return;
    }
    std::map<ArgumentType, std::vector<Span>> taken;
    for (const Field *f : args) {
      const ArgumentType at = *ParseArgumentType(f->tag);
      for (const std::string &value : f->values) {
        if (value == "None") continue;
        if (IsLabeled(at)) {
          if (auto label = ParseLabelLenient(at, value)) {
            e.arguments.push_back(Argument{at, std::nullopt, *label});
          } else {
            Issue("UNKNOWN_LABEL", "'" + value + "' is not a " + std::string(Name(at)) + " label");
          }
        } else if (auto span = ResolveArgument(value, e.trigger, taken[at])) {
          taken[at].push_back(*span);
          e.arguments.push_back(Argument{at, std::move(span), std::nullopt});
        } else {
          Issue("SPAN_NOT_FOUND",
                std::string(Name(at)) + " '" + value + "' does not occur in the sentence");
        }
      }
    }
    if (type == EventType::kProblem &&
        std::none_of(e.arguments.begin(), e.arguments.end(),
                     [](const Argument &a) { return a.type == ArgumentType::kAssertion; })) {
      Issue("MISSING_ASSERTION", "Problem '" + e.trigger.text + "' has no Assertion");
    }
    out_.events.push_back(std::move(e));
  }

  SentenceIndexer index_;
  std::string id_prefix_;
  std::size_t anchor_ = 0;
  std::optional<Occurrence> last_trigger_;
  DecodedEvents out_;
};

// ----- marker format --------------------------------------------------------

std::string OpenMarker(EventType t) { return "<" + std::string(Name(t)) + ">"; }
std::string CloseMarker(EventType t) { return "</" + std::string(Name(t)) + ">"; }

std::size_t Distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

std::vector<const WindowEvent *> MatchMention(const ContextWindow &w, std::string_view mention,
                                              EventType type) {
  std::vector<const WindowEvent *> exact;
  std::vector<const WindowEvent *> folded;
  const std::string lower = Lower(mention);
  for (const WindowEvent &we : w.events) {
    if (we.event.type != type) continue;
    if (we.event.trigger.text == mention) exact.push_back(&we);
    if (Lower(we.event.trigger.text) == lower) folded.push_back(&we);
  }
  return exact.empty() ? folded : exact;
}

}  // namespace

// ----- events ---------------------------------------------------------------

std::string EncodeEvents(const Span &sentence, std::span<const Event> events) {
  std::vector<const Event *> ordered;
  for (const Event &e : events) {
    if (!Within(e.trigger, sentence)) {
      throw Error("EVENT_OUTSIDE_SENTENCE", "trigger " + e.id + " '" + e.trigger.text +
                                                "' is not inside the sentence");
    }
    ordered.push_back(&e);
  }
  if (ordered.empty()) return "None";
  std::stable_sort(ordered.begin(), ordered.end(), [](const Event *a, const Event *b) {
    return std::tie(a->trigger.start, a->trigger.end) < std::tie(b->trigger.start, b->trigger.end);
  });

  std::string out;
  for (const Event *e : ordered) {
    if (!out.empty()) out += " [SEP] ";
    out += OpenMarker(e->type);
    out += ' ';
    out += e->trigger.text;
    if (e->type == EventType::kDrug) continue;
    for (ArgumentType at : kArgumentTypes) {
      std::vector<const Argument *> group;
      for (const Argument &a : e->arguments) {
        if (a.type != at) continue;
        if (IsLabeled(at) ? a.label.has_value() : (a.span && Within(*a.span, sentence))) {
          group.push_back(&a);
        }
      }
      if (group.empty()) continue;
      if (!IsLabeled(at)) {
        std::stable_sort(group.begin(), group.end(), [](const Argument *a, const Argument *b) {
          return a->span->start < b->span->start;
        });
      }
      out += " <" + std::string(Name(at)) + "> ";
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (i > 0) out += " <s> ";
        out += IsLabeled(at) ? std::string(Name(*group[i]->label)) : group[i]->span->text;
      }
    }
  }
  return out;
}

DecodedEvents DecodeEvents(const Span &sentence, std::string_view output,
                           std::string_view id_prefix) {
  return EventDecoder(sentence, id_prefix).Run(output);
}

std::string RenderEventPrompt(std::string_view sentence_text) {
  return FillTemplate(PromptTemplate("event_extraction"), {{"NOTE", std::string(sentence_text)}});
}

// ----- marker ---------------------------------------------------------------

MarkerInput EncodeMarkerInput(const ContextWindow &window) {
  MarkerInput out;
  std::vector<const Event *> triggers;
  for (const WindowEvent &we : window.events) triggers.push_back(&we.event);
  std::stable_sort(triggers.begin(), triggers.end(), [](const Event *a, const Event *b) {
    if (a->trigger.start != b->trigger.start) return a->trigger.start < b->trigger.start;
    return a->trigger.end > b->trigger.end;
  });
  std::vector<const Event *> kept;
  for (const Event *e : triggers) {
    if (e->trigger.start < window.start || e->trigger.end > window.end) continue;
    if (!kept.empty() && e->trigger.start < kept.back()->trigger.end) {
      out.issues.push_back({"OVERLAPPING_TRIGGERS", "'" + e->trigger.text + "' overlaps '" +
                                                        kept.back()->trigger.text + "'; unmarked"});
      continue;
    }
    kept.push_back(e);
  }
  const NoteText text(window.text);
  std::size_t cursor = 0;
  for (const Event *e : kept) {
    const std::size_t s = e->trigger.start - window.start;
    const std::size_t t = e->trigger.end - window.start;
    out.text += text.slice_view(cursor, s);
    out.text += OpenMarker(e->type);
    out.text += text.slice_view(s, t);
    out.text += CloseMarker(e->type);
    cursor = t;
  }
  out.text += text.slice_view(cursor, text.size());
  return out;
}

std::string StripMarkers(std::string_view marked) {
  static const std::array<std::string, 4> kMarkers = {
      OpenMarker(EventType::kDrug), CloseMarker(EventType::kDrug),
      OpenMarker(EventType::kProblem), CloseMarker(EventType::kProblem)};
  std::string out;
  std::size_t i = 0;
  while (i < marked.size()) {
    bool hit = false;
    for (const std::string &m : kMarkers) {
      if (marked.substr(i, m.size()) == m) {
        i += m.size();
        hit = true;
        break;
      }
    }
    if (!hit) out += marked[i++];
  }
  return out;
}

std::string RenderMarkerPrompt(const ContextWindow &window) {
  return FillTemplate(PromptTemplate("relation_marker"), {{"NOTE", EncodeMarkerInput(window).text}});
}

std::string EncodeMarkerOutput(const ContextWindow &window, std::span<const Relation> relations) {
  std::string out;
  for (RelationType type : kRelationTypes) {
    std::string line;
    for (const Relation &r : relations) {
      if (r.type != type) continue;
      const WindowEvent *h = window.Find(r.head);
      const WindowEvent *t = window.Find(r.tail);
      if (!h || !t) continue;
      line += line.empty() ? std::string(Name(type)) + ": " : " [SEP] ";
      line += h->event.trigger.text + " ... " + t->event.trigger.text;
    }
    if (line.empty()) continue;
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out.empty() ? "None" : out;
}

DecodedRelations DecodeMarkerOutput(std::string_view output, const ContextWindow &window) {
  DecodedRelations out;
  auto issue = [&](std::string code, std::string detail) {
    out.issues.push_back({std::move(code), std::move(detail)});
  };
  for (std::string_view line : SplitOn(output, "\n")) {
    line = Trim(line);
    if (line.empty() || line == "None") continue;
    std::string_view name;
    std::string_view body;
    if (line.front() == '<' && line.find('>') != std::string_view::npos) {
      const std::size_t close = line.find('>');
      name = line.substr(1, close - 1);
      body = line.substr(close + 1);
      if (!body.empty() && body.front() == ':') body.remove_prefix(1);
    } else {
      const std::size_t colon = line.find(':');
      if (colon == std::string_view::npos) {
        issue("MALFORMED_LINE", "no relation type in '" + std::string(line) + "'");
        continue;
      }
      name = line.substr(0, colon);
      body = line.substr(colon + 1);
    }
    auto type = ParseRelationType(Trim(name));
    if (!type) {
      issue("UNKNOWN_RELATION", "'" + std::string(Trim(name)) + "'");
      continue;
    }
    for (std::string_view inst : SplitOn(body, kSep)) {
      inst = Trim(inst);
      if (inst.empty() || inst == "None") continue;
      const std::size_t dots = inst.find("...");
      if (dots == std::string_view::npos) {
        issue("MALFORMED_INSTANCE", "expected '<head> ... <tail>' in '" + std::string(inst) + "'");
        continue;
      }
      const std::string_view head_text = Trim(inst.substr(0, dots));
      const std::string_view tail_text = Trim(inst.substr(dots + 3));
      auto heads = MatchMention(window, head_text, HeadTypeOf(*type));
      auto tails = MatchMention(window, tail_text, TailTypeOf(*type));
      if (heads.empty() || tails.empty()) {
        issue("UNRESOLVED_MENTION", std::string(Name(*type)) + ": '" + std::string(head_text) +
                                        "' ... '" + std::string(tail_text) + "'");
        continue;
      }
      const WindowEvent *best_h = nullptr;
      const WindowEvent *best_t = nullptr;
      std::pair<std::size_t, std::size_t> best_key{std::numeric_limits<std::size_t>::max(), 0};
      for (const WindowEvent *h : heads) {
        for (const WindowEvent *t : tails) {
          if (h == t) continue;
          const std::pair<std::size_t, std::size_t> key{
              Distance(h->sentence, t->sentence),
              Distance(h->event.trigger.start, t->event.trigger.start)};
          if (!best_h || key < best_key) {
            best_h = h;
            best_t = t;
            best_key = key;
          }
        }
      }
      if (!best_h) {
        issue("UNRESOLVED_MENTION", "head and tail resolve to the same event");
        continue;
      }
      Relation r{*type, best_h->event.id, best_t->event.id};
      if (std::find(out.relations.begin(), out.relations.end(), r) != out.relations.end()) {
        issue("DUPLICATE_RELATION", std::string(Name(*type)) + " repeated");
        continue;
      }
      out.relations.push_back(std::move(r));
    }
  }
  return out;
}

// ----- QA -------------------------------------------------------------------

QaPrompt BuildQaPrompt(const Event &head, const Event &tail, const ContextWindow &window) {
  QaPrompt p;
  if (head.type == EventType::kDrug && tail.type == EventType::kProblem) {
    p.kind = PairKind::kDrugProblem;
  } else if (head.type == EventType::kProblem && tail.type == EventType::kProblem) {
    p.kind = PairKind::kProblemProblem;
  } else {
    throw Error("INVALID_PAIR_TYPES", std::string(Name(head.type)) + " -> " +
                                          std::string(Name(tail.type)));
  }
  p.head = head.id;
  p.tail = tail.id;
  p.window_text = window.text;
  const std::string_view tmpl = PromptTemplate(
      p.kind == PairKind::kDrugProblem ? "qa_drug_problem" : "qa_problem_problem");
  p.rendered = FillTemplate(
      tmpl, {{"A", head.trigger.text}, {"B", tail.trigger.text}, {"NOTE", window.text}});
  // Options are the "(X) ..." lines of the template.
  for (std::string_view line : SplitOn(tmpl, "\n")) {
    if (line.size() > 3 && line[0] == '(' && line[2] == ')') {
      p.options.push_back(
          FillTemplate(line, {{"A", head.trigger.text}, {"B", tail.trigger.text}}));
    }
  }
  return p;
}

QaMapping QaMapping::Default() {
  return QaMapping{{RelationType::kAdminFor, RelationType::kNotAdminBecause,
                    RelationType::kWorsens, RelationType::kCauses, RelationType::kImproves,
                    std::nullopt}};
}

std::optional<char> ExtractAnswerLetter(std::string_view answer, std::string_view letters) {
  auto allowed = [&](char c) -> std::optional<char> {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (letters.find(c) != std::string_view::npos) return c;
    return std::nullopt;
  };
  auto is_alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };

  for (std::size_t i = 0; i + 2 < answer.size(); ++i) {
    const char open = answer[i];
    const char close = answer[i + 2];
    if ((open == '(' && close == ')') || (open == '[' && close == ']')) {
      if (auto c = allowed(answer[i + 1])) return c;
    }
  }

  std::string_view s = answer;
  auto skip_noise = [&]() {
    while (!s.empty() && !is_alpha(s.front())) s.remove_prefix(1);
  };
  skip_noise();
  for (std::string_view prefix : {"answer", "option", "choice"}) {
    if (s.size() >= prefix.size() && Lower(s.substr(0, prefix.size())) == prefix &&
        (s.size() == prefix.size() || !is_alpha(s[prefix.size()]))) {
      s.remove_prefix(prefix.size());
      skip_noise();
      break;
    }
  }
  if (!s.empty() && (s.size() == 1 || !is_alpha(s[1]))) return allowed(s.front());
  return std::nullopt;
}

std::optional<Relation> ParseQaAnswer(std::string_view answer, PairKind kind, const Event &head,
                                      const Event &tail, const QaMapping &mapping) {
  const std::string_view letters = kind == PairKind::kDrugProblem ? "ABCDEF" : "ABC";
  auto letter = ExtractAnswerLetter(answer, letters);
  if (!letter) {
    throw Error("UNPARSEABLE_ANSWER", "no option letter in '" + std::string(answer) + "'");
  }
  if (kind == PairKind::kDrugProblem) {
    const auto type = mapping.drug_problem[static_cast<std::size_t>(*letter - 'A')];
    if (!type) return std::nullopt;
    return Relation{*type, head.id, tail.id};
  }
  if (*letter == 'A') return Relation{RelationType::kPip, head.id, tail.id};
  if (*letter == 'B') return Relation{RelationType::kPip, tail.id, head.id};
  return std::nullopt;
}

char GoldQaLetter(PairKind kind, const Event &head, const Event &tail,
                  std::span<const Relation> relations, const QaMapping &mapping) {
  if (kind == PairKind::kProblemProblem) {
    for (const Relation &r : relations) {
      if (r.type == RelationType::kPip && r.head == head.id && r.tail == tail.id) return 'A';
    }
    for (const Relation &r : relations) {
      if (r.type == RelationType::kPip && r.head == tail.id && r.tail == head.id) return 'B';
    }
    return 'C';
  }
  for (const Relation &r : relations) {
    if (r.head != head.id || r.tail != tail.id) continue;
    for (std::size_t i = 0; i < mapping.drug_problem.size(); ++i) {
      if (mapping.drug_problem[i] == r.type) return static_cast<char>('A' + i);
    }
  }
  for (std::size_t i = 0; i < mapping.drug_problem.size(); ++i) {
    if (!mapping.drug_problem[i]) return static_cast<char>('A' + i);
  }
  return 'F';
}

}  // namespace cacer
