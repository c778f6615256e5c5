#include "cacer/synth.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <set>

#include "cacer/error.h"
#include "cacer/glm_codec.h"
#include "cacer/random.h"
#include "cacer/resources.h"
#include "cacer/standoff.h"
#include "cacer/text.h"
#include "cacer/validate.h"

namespace cacer {
namespace {

constexpr int kSentenceAttempts = 64;
constexpr int kNoteAttempts = 16;

struct DraftArgument {
  ArgumentType type;
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<Subtype> label;
};

struct DraftEvent {
  EventType type = EventType::kProblem;
  std::string phrase;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<DraftArgument> arguments;
};

struct DraftSentence {
  std::string text;
  std::size_t length = 0;  // code points
  bool header = false;     // ends in ':' and is followed by a line break
  std::vector<DraftEvent> events;

  void Add(std::string_view s) {
    text += s;
    length += CodePointLength(s);
  }
  std::pair<std::size_t, std::size_t> AddSpan(std::string_view s) {
    const std::size_t start = length;
    Add(s);
    return {start, length};
  }
};

// Endpoints as (sentence within the unit, event within the sentence).
struct DraftRelation {
  RelationType type;
  std::pair<std::size_t, std::size_t> head;
  std::pair<std::size_t, std::size_t> tail;
};

struct Unit {
  std::vector<DraftSentence> sentences;
  std::vector<DraftRelation> relations;
};

struct Templates {
  std::vector<std::string_view> forms;
};

const std::array<Templates, 6> &IntraTemplates() {
  static const std::array<Templates, 6> kTemplates = {{
      {{"Started {H} for {T}.", "{H} was prescribed for {T}.", "Continue {H} to treat {T}."}},
      {{"{H} was held because of {T}.", "Did not start {H} given {T}."}},
      {{"{T} likely caused by {H}.", "{H} has led to {T}."}},
      {{"{T} better since starting {H}.", "{H} has helped with {T}."}},
      {{"{T} aggravated by {H}.", "{H} made {T} worse."}},
      {{"{T} due to {H}.", "{H} with resulting {T}."}},
  }};
  return kTemplates;
}

constexpr std::array<std::string_view, 3> kDrugClosers = {"Continue {E}.", "Started {E} today.",
                                                          "Plan to adjust {E}."};
constexpr std::array<std::string_view, 2> kProblemClosers = {"Now with {E}.", "Also noted {E}."};
constexpr std::array<std::string_view, 3> kProblemAlone = {"Patient reports {E}.",
                                                           "Exam notable for {E}.", "{E} noted today."};
constexpr std::array<std::string_view, 3> kDrugAlone = {"Currently taking {E}.", "Refilled {E} today.",
                                                        "Medication list includes {E}."};

std::string_view AssertionCue(Subtype s) {
  switch (s) {
    case Subtype::kAbsent:
      return "no ";
    case Subtype::kPossible:
      return "possible ";
    case Subtype::kConditional:
      return "on exertion ";
    case Subtype::kHypothetical:
      return "risk of ";
    case Subtype::kNotPatient:
      return "family history of ";
    default:
      return "";
  }
}

std::string_view ModifierCue(Subtype s) {
  switch (s) {
    case Subtype::kWorsening:
      return "worsening ";
    case Subtype::kNoChange:
      return "stable ";
    case Subtype::kImproving:
      return "improving ";
    case Subtype::kResolved:
      return "resolved ";
    case Subtype::kMild:
      return "mild ";
    case Subtype::kModerate:
      return "moderate ";
    case Subtype::kSevere:
      return "severe ";
    default:
      return "";
  }
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Per-note generation state.
class NoteBuilder {
 public:
  NoteBuilder(const GenConfig &cfg, std::uint64_t seed)
      : cfg_(cfg), lex_(cfg.lexicons), rng_(seed), q_problem_(cfg.StandaloneProblemProbability()) {}

  Document Build(std::string doc_id);

 private:
  const std::string &Pick(const std::vector<std::string> &list) {
    return list[rng_.Below(list.size())];
  }
  template <std::size_t N>
  std::string_view Pick(const std::array<std::string_view, N> &list) {
    return list[rng_.Below(N)];
  }
  Subtype DrawLabel(ArgumentType owner) {
    const auto labels = LabelsFor(owner);
    std::vector<double> w;
    for (Subtype s : labels) w.push_back(cfg_.subtypes[static_cast<std::size_t>(s)]);
    return labels[rng_.Categorical(w)];
  }
  // Unused trigger phrase from `list`, reserved for the current unit.
  std::string DrawTrigger(EventType type);

  void AddDrug(DraftSentence &s);
  void AddProblem(DraftSentence &s);
  void AddEvent(DraftSentence &s, EventType type) {
    type == EventType::kDrug ? AddDrug(s) : AddProblem(s);
  }
  // Renders `form`, replacing {H}, {T} and {E} with events of the given types.
  // Returns the sentence; events appear in text order, and `slots` receives
  // the event index of each placeholder in the order H, T, E.
  DraftSentence Render(std::string_view form, EventType h, EventType t, EventType e,
                       std::array<std::size_t, 3> &slots);

  Unit IntraRelation(RelationType type);
  Unit InterRelation(RelationType type, std::size_t length);
  Unit SingleEvent(bool problem);
  Unit Filler();
  Unit DrawUnit();

  bool Accept(const DraftSentence &s) const;
  // Retries `make` until every sentence passes Accept().
  template <typename Make>
  Unit Checked(Make make);

  const GenConfig &cfg_;
  const Lexicons &lex_;
  Rng rng_;
  double q_problem_;
  std::set<std::string> used_;     // committed trigger phrases, lowercase
  std::set<std::string> pending_;  // phrases drawn for the unit in progress
};

std::string NoteBuilder::DrawTrigger(EventType type) {
  const auto &list = type == EventType::kDrug ? lex_.drugs : lex_.problems;
  const std::size_t first = rng_.Below(list.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string &phrase = list[(first + k) % list.size()];
    const std::string key = Lower(phrase);
    if (used_.count(key) || pending_.count(key)) continue;
    pending_.insert(key);
    return phrase;
  }
  throw Error("INVALID_CONFIG", std::string(Name(type)) + " lexicon exhausted within one note");
}

void NoteBuilder::AddDrug(DraftSentence &s) {
  DraftEvent e;
  e.type = EventType::kDrug;
  e.phrase = DrawTrigger(EventType::kDrug);
  std::tie(e.start, e.end) = s.AddSpan(e.phrase);
  s.events.push_back(std::move(e));
}

void NoteBuilder::AddProblem(DraftSentence &s) {
  DraftEvent e;
  e.type = EventType::kProblem;
  e.phrase = DrawTrigger(EventType::kProblem);
  auto attached = [&](ArgumentType t) {
    return rng_.Bernoulli(cfg_.attach[static_cast<std::size_t>(t)]);
  };
  const Subtype assertion = DrawLabel(ArgumentType::kAssertion);
  e.arguments.push_back({ArgumentType::kAssertion, 0, 0, assertion});
  s.Add(AssertionCue(assertion));
  for (ArgumentType t : {ArgumentType::kChange, ArgumentType::kSeverity}) {
    if (!attached(t)) continue;
    const Subtype label = DrawLabel(t);
    e.arguments.push_back({t, 0, 0, label});
    s.Add(ModifierCue(label));
  }
  std::tie(e.start, e.end) = s.AddSpan(e.phrase);
  auto span_arg = [&](ArgumentType t, std::string_view lead, const std::string &phrase) {
    s.Add(lead);
    const auto [a, b] = s.AddSpan(phrase);
    e.arguments.push_back({t, a, b, std::nullopt});
  };
  if (attached(ArgumentType::kAnatomy)) span_arg(ArgumentType::kAnatomy, " in the ", Pick(lex_.anatomy));
  if (attached(ArgumentType::kCharacteristics)) {
    const std::string &first = Pick(lex_.characteristics);
    span_arg(ArgumentType::kCharacteristics, " described as ", first);
    if (lex_.characteristics.size() > 1 && rng_.Bernoulli(cfg_.second_characteristic)) {
      std::string second = Pick(lex_.characteristics);
      while (second == first) second = Pick(lex_.characteristics);
      span_arg(ArgumentType::kCharacteristics, " and ", second);
    }
  }
  if (attached(ArgumentType::kDuration)) span_arg(ArgumentType::kDuration, " for ", Pick(lex_.durations));
  if (attached(ArgumentType::kFrequency)) span_arg(ArgumentType::kFrequency, " ", Pick(lex_.frequencies));
  s.events.push_back(std::move(e));
}

DraftSentence NoteBuilder::Render(std::string_view form, EventType h, EventType t, EventType e,
                                  std::array<std::size_t, 3> &slots) {
  DraftSentence s;
  std::size_t i = 0;
  while (i < form.size()) {
    if (form[i] == '{' && i + 2 < form.size() && form[i + 2] == '}') {
      const char key = form[i + 1];
      const std::size_t slot = key == 'H' ? 0 : key == 'T' ? 1 : 2;
      slots[slot] = s.events.size();
      AddEvent(s, slot == 0 ? h : slot == 1 ? t : e);
      i += 3;
      continue;
    }
    const std::size_t next = std::min(form.find('{', i + 1), form.size());
    s.Add(form.substr(i, next - i));
    i = next;
  }
  return s;
}

Unit NoteBuilder::IntraRelation(RelationType type) {
  const auto &forms = IntraTemplates()[static_cast<std::size_t>(type)].forms;
  const std::string_view form = forms[rng_.Below(forms.size())];
  std::array<std::size_t, 3> slots{};
  Unit u;
  u.sentences.push_back(Render(form, HeadTypeOf(type), TailTypeOf(type), EventType::kDrug, slots));
  u.relations.push_back({type, {0, slots[0]}, {0, slots[1]}});
  return u;
}

Unit NoteBuilder::InterRelation(RelationType type, std::size_t length) {
  Unit u;
  std::array<std::size_t, 3> slots{};
  DraftSentence header = Render("{E}:", {}, {}, EventType::kProblem, slots);
  header.header = true;
  u.sentences.push_back(std::move(header));
  for (std::size_t k = 2; k < length; ++k) u.sentences.push_back(Filler().sentences.front());
  const bool pip = type == RelationType::kPip;
  const std::string_view closer = pip ? Pick(kProblemClosers) : Pick(kDrugClosers);
  u.sentences.push_back(
      Render(closer, {}, {}, pip ? EventType::kProblem : EventType::kDrug, slots));
  const std::pair<std::size_t, std::size_t> first{0, 0};
  const std::pair<std::size_t, std::size_t> last{length - 1, 0};
  if (!pip || rng_.Bernoulli(0.5)) {
    u.relations.push_back({type, last, first});
  } else {
    u.relations.push_back({type, first, last});
  }
  return u;
}

Unit NoteBuilder::SingleEvent(bool problem) {
  const std::string_view form = problem ? Pick(kProblemAlone) : Pick(kDrugAlone);
  std::array<std::size_t, 3> slots{};
  Unit u;
  u.sentences.push_back(
      Render(form, {}, {}, problem ? EventType::kProblem : EventType::kDrug, slots));
  return u;
}

Unit NoteBuilder::Filler() {
  Unit u;
  DraftSentence s;
  s.Add(Pick(lex_.fillers));
  u.sentences.push_back(std::move(s));
  return u;
}

Unit NoteBuilder::DrawUnit() {
  const std::array<double, 3> kinds = {cfg_.relation_units, cfg_.event_units, cfg_.filler_units};
  switch (rng_.Categorical(kinds)) {
    case 0: {
      const auto type = static_cast<RelationType>(rng_.Categorical(cfg_.relation_mix));
      const double u = rng_.Uniform();
      if (u < cfg_.intra_fraction) return Checked([&] { return IntraRelation(type); });
      const std::size_t length = u < cfg_.intra_fraction + cfg_.long_range_fraction
                                     ? rng_.Between(6, 8)
                                     : rng_.Between(2, 5);
      return Checked([&] { return InterRelation(type, length); });
    }
    case 1: {
      const bool problem = rng_.Bernoulli(q_problem_);
      return Checked([&] { return SingleEvent(problem); });
    }
    default:
      return Filler();
  }
}

// A sentence is usable when its event encoding decodes back to the same
// events without issues.
bool NoteBuilder::Accept(const DraftSentence &s) const {
  Document d;
  d.text = NoteText(s.text);
  const Span sentence = MakeSpan(d.text, 0, s.length);
  d.sentences = {sentence};
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const DraftEvent &de = s.events[i];
    Event e;
    e.id = "E" + std::to_string(i + 1);
    e.type = de.type;
    e.trigger = MakeSpan(d.text, de.start, de.end);
    for (const DraftArgument &a : de.arguments) {
      Argument arg{a.type, std::nullopt, a.label};
      if (!IsLabeled(a.type)) arg.span = MakeSpan(d.text, a.start, a.end);
      e.arguments.push_back(std::move(arg));
    }
    d.events.push_back(std::move(e));
  }
  const DecodedEvents decoded = DecodeEvents(sentence, EncodeEvents(sentence, d.events));
  if (!decoded.issues.empty()) return false;
  Document back = d;
  back.events = decoded.events;
  return EquivalentModuloIds(d, back);
}

template <typename Make>
Unit NoteBuilder::Checked(Make make) {
  for (int attempt = 0; attempt < kSentenceAttempts; ++attempt) {
    pending_.clear();
    Unit u = make();
    bool ok = true;
    for (const DraftSentence &s : u.sentences) ok = ok && Accept(s);
    if (ok) {
      used_.insert(pending_.begin(), pending_.end());
      pending_.clear();
      return u;
    }
  }
  throw Error("GENERATION_FAILED", "no decodable sentence after repeated draws");
}

Document NoteBuilder::Build(std::string doc_id) {
  const std::size_t target = rng_.Between(cfg_.min_sentences, cfg_.max_sentences);
  std::vector<Unit> units;
  std::size_t count = 0;
  while (count < target) {
    units.push_back(DrawUnit());
    count += units.back().sentences.size();
  }

  Document doc;
  doc.doc_id = std::move(doc_id);
  std::string text;
  std::size_t cp = 0;
  std::vector<std::pair<std::size_t, std::size_t>> planned;
  struct Placed {
    std::size_t offset;
    const DraftSentence *sentence;
  };
  std::vector<Placed> placed;
  std::vector<std::vector<std::size_t>> unit_sentence;  // unit -> global sentence index
  bool prev_header = false;
  for (const Unit &u : units) {
    unit_sentence.emplace_back();
    for (const DraftSentence &s : u.sentences) {
      if (!placed.empty()) {
        text += (prev_header || s.header) ? "\n" : " ";
        ++cp;
      }
      unit_sentence.back().push_back(placed.size());
      placed.push_back({cp, &s});
      planned.emplace_back(cp, cp + s.length);
      text += s.text;
      cp += s.length;
      prev_header = s.header;
    }
  }
  doc.text = NoteText(std::move(text));

  // Events in text order; remember the id of each (sentence, event) slot.
  std::vector<std::vector<std::string>> ids(placed.size());
  for (std::size_t si = 0; si < placed.size(); ++si) {
    const auto &[offset, s] = placed[si];
    for (const DraftEvent &de : s->events) {
      Event e;
      e.id = "E" + std::to_string(doc.events.size() + 1);
      e.type = de.type;
      e.trigger = MakeSpan(doc.text, offset + de.start, offset + de.end);
      for (const DraftArgument &a : de.arguments) {
        Argument arg{a.type, std::nullopt, a.label};
        if (!IsLabeled(a.type)) arg.span = MakeSpan(doc.text, offset + a.start, offset + a.end);
        e.arguments.push_back(std::move(arg));
      }
      ids[si].push_back(e.id);
      doc.events.push_back(std::move(e));
    }
  }
  for (std::size_t ui = 0; ui < units.size(); ++ui) {
    for (const DraftRelation &r : units[ui].relations) {
      const std::size_t hs = unit_sentence[ui][r.head.first];
      const std::size_t ts = unit_sentence[ui][r.tail.first];
      doc.relations.push_back({r.type, ids[hs][r.head.second], ids[ts][r.tail.second]});
    }
  }

  doc.sentences = SegmentSentences(doc.text);
  bool aligned = doc.sentences.size() == planned.size();
  for (std::size_t i = 0; aligned && i < planned.size(); ++i) {
    aligned = doc.sentences[i].start == planned[i].first && doc.sentences[i].end == planned[i].second;
  }
  if (!aligned) throw Error("GENERATION_FAILED", doc.doc_id + ": sentence boundaries drifted");
  if (HasErrors(ValidateDocument(doc))) {
    throw Error("GENERATION_FAILED", doc.doc_id + ": generated note fails validation");
  }
  return doc;
}

bool ValidPhrase(std::string_view s) {
  if (s.empty()) return false;
  return s.find_first_of(".!?:;<>[]{}\n\r\t") == std::string_view::npos;
}

bool ValidFiller(std::string_view s) {
  if (s.size() < 2 || s.back() != '.') return false;
  const std::string_view body = s.substr(0, s.size() - 1);
  return body.find_first_of(".!?:;<>[]{}\n\r\t") == std::string_view::npos;
}

std::string DocId(std::size_t index, std::size_t n_notes) {
  std::size_t width = 5;
  for (std::size_t n = n_notes; n >= 100000; n /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "synth-%0*zu", static_cast<int>(width), index);
  return buf;
}

std::vector<Document> Generate(const GenConfig &cfg, bool parallel) {
  cfg.Validate();
  std::vector<Document> docs(cfg.n_notes);
  std::vector<std::exception_ptr> failures(cfg.n_notes);
  const auto n = static_cast<std::ptrdiff_t>(cfg.n_notes);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        docs[i] = GenerateNote(cfg, static_cast<std::size_t>(i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) docs[i] = GenerateNote(cfg, static_cast<std::size_t>(i));
  }
  for (const auto &f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return docs;
}

}  // namespace

std::vector<std::string> ParseLexicon(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
    pos = nl + 1;
  }
  return out;
}

namespace {

struct LexiconField {
  std::string_view name;
  std::vector<std::string> Lexicons::*list;
};

constexpr std::array<LexiconField, 7> kLexiconFields = {{
    {"problems", &Lexicons::problems},
    {"drugs", &Lexicons::drugs},
    {"anatomy", &Lexicons::anatomy},
    {"characteristics", &Lexicons::characteristics},
    {"durations", &Lexicons::durations},
    {"frequencies", &Lexicons::frequencies},
    {"fillers", &Lexicons::fillers},
}};

}  // namespace

Lexicons Lexicons::Default() {
  Lexicons lex;
  for (const auto &f : kLexiconFields) lex.*f.list = ParseLexicon(DefaultLexicon(f.name));
  return lex;
}

Lexicons Lexicons::Load(const std::filesystem::path &dir) {
  Lexicons lex = Default();
  for (const auto &f : kLexiconFields) {
    const auto path = dir / (std::string(f.name) + ".txt");
    if (std::filesystem::exists(path)) lex.*f.list = ParseLexicon(ReadFile(path));
  }
  return lex;
}

double GenConfig::StandaloneProblemProbability() const {
  if (event_units <= 0.0) return 0.0;
  const double pip = relation_mix[static_cast<std::size_t>(RelationType::kPip)];
  const double events_per_unit = 2.0 * relation_units + event_units;
  return (problem_fraction * events_per_unit - relation_units * (1.0 + pip)) / event_units;
}

void GenConfig::Validate() const {
  auto fail = [](const std::string &why) { throw Error("INVALID_CONFIG", why); };
  auto prob = [&](double p, std::string_view what) {
    if (!(p >= 0.0 && p <= 1.0)) fail(std::string(what) + " must lie in [0,1]");
  };
  auto sums_to_one = [&](double s, std::string_view what) {
    if (std::abs(s - 1.0) > 1e-9) fail(std::string(what) + " must sum to 1");
  };
  if (min_sentences == 0 || min_sentences > max_sentences) {
    fail("need 1 <= min_sentences <= max_sentences");
  }
  prob(problem_fraction, "problem_fraction");
  for (std::size_t i = 0; i < attach.size(); ++i) {
    prob(attach[i], "attach." + std::string(Name(static_cast<ArgumentType>(i))));
  }
  if (attach[static_cast<std::size_t>(ArgumentType::kAssertion)] != 1.0) {
    fail("every Problem carries an Assertion; attach.Assertion must be 1");
  }
  prob(second_characteristic, "second_characteristic");
  for (ArgumentType owner : {ArgumentType::kAssertion, ArgumentType::kChange, ArgumentType::kSeverity}) {
    double s = 0.0;
    for (Subtype t : LabelsFor(owner)) {
      prob(subtypes[static_cast<std::size_t>(t)], "subtypes." + std::string(Name(t)));
      s += subtypes[static_cast<std::size_t>(t)];
    }
    sums_to_one(s, "subtypes of " + std::string(Name(owner)));
  }
  double mix = 0.0;
  for (double p : relation_mix) {
    prob(p, "relation_mix");
    mix += p;
  }
  sums_to_one(mix, "relation_mix");
  prob(intra_fraction, "intra_fraction");
  prob(long_range_fraction, "long_range_fraction");
  if (intra_fraction + long_range_fraction > 1.0 + 1e-12) {
    fail("intra_fraction + long_range_fraction exceeds 1");
  }
  prob(relation_units, "relation_units");
  prob(event_units, "event_units");
  prob(filler_units, "filler_units");
  sums_to_one(relation_units + event_units + filler_units, "unit fractions");
  const double q = StandaloneProblemProbability();
  if (event_units > 0.0 && !(q >= -1e-12 && q <= 1.0 + 1e-12)) {
    fail("problem_fraction is unreachable with this relation mix and unit composition");
  }

  std::set<std::string> triggers;
  for (const auto &f : kLexiconFields) {
    const auto &list = lexicons.*f.list;
    if (list.empty()) fail("lexicon " + std::string(f.name) + " is empty");
    const bool filler = f.name == "fillers";
    for (const std::string &entry : list) {
      if (filler ? !ValidFiller(entry) : !ValidPhrase(entry)) {
        fail("lexicon " + std::string(f.name) + " has unusable entry '" + entry + "'");
      }
      if ((f.name == "problems" || f.name == "drugs") && !triggers.insert(Lower(entry)).second) {
        fail("trigger phrase '" + entry + "' is listed twice");
      }
    }
  }
}

std::uint64_t GenConfig::Digest() const {
  std::string s;
  auto num = [&](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    s += buf;
  };
  s += std::to_string(seed) + ";" + std::to_string(n_notes) + ";" + std::to_string(min_sentences) +
       ";" + std::to_string(max_sentences) + ";";
  num(problem_fraction);
  for (double v : attach) num(v);
  num(second_characteristic);
  for (double v : subtypes) num(v);
  for (double v : relation_mix) num(v);
  num(intra_fraction);
  num(long_range_fraction);
  num(relation_units);
  num(event_units);
  num(filler_units);
  for (const auto &f : kLexiconFields) {
    s += f.name;
    s += '\x1f';
    for (const std::string &e : lexicons.*f.list) {
      s += e;
      s += '\x1e';
    }
  }
  return Fnv1a64(s);
}

Document GenerateNote(const GenConfig &cfg, std::size_t index) {
  const std::uint64_t note_seed = DeriveSeed(cfg.seed, index);
  std::optional<Error> last;
  for (int attempt = 0; attempt < kNoteAttempts; ++attempt) {
    NoteBuilder builder(cfg, DeriveSeed(note_seed, static_cast<std::uint64_t>(attempt)));
    try {
      return builder.Build(DocId(index, cfg.n_notes));
    } catch (const Error &e) {
      if (e.code() != "GENERATION_FAILED") throw;
      last = e;
    }
  }
  throw *last;
}

std::vector<Document> GenerateCorpus(const GenConfig &cfg) { return Generate(cfg, true); }

std::vector<Document> GenerateCorpusSerial(const GenConfig &cfg) { return Generate(cfg, false); }

std::uint64_t CorpusDigest(std::span<const Document> docs) {
  std::uint64_t h = Fnv1a64("");
  for (const Document &d : docs) {
    const StandoffFilePair p = WriteStandoff(d);
    h = Fnv1a64(d.doc_id + '\x1d', h);
    h = Fnv1a64(p.text + '\x1d', h);
    h = Fnv1a64(p.ann + '\x1d', h);
  }
  return h;
}

}  // namespace cacer
