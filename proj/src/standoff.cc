#include "cacer/standoff.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cacer/error.h"

namespace cacer {
namespace {

struct TextBound {
  int line = 0;
  std::string type;
  Span span;
};

struct EventRecord {
  int line = 0;
  std::string id;
  std::string trigger_ref;
  std::vector<std::pair<std::string, std::string>> roles;  // (role, T id)
};

struct AttributeRecord {
  int line = 0;
  ArgumentType type;
  std::string target;
  Subtype label;
};

struct RelationRecord {
  int line = 0;
  RelationType type;
  std::string arg1;
  std::string arg2;
};

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool ParseOffset(std::string_view s, std::size_t &out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Newlines cannot appear inside a record, so span text is compared and
// written with line breaks and tabs folded to spaces.
std::string FoldBreaks(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

std::string RoleBase(std::string_view role) {
  std::size_t end = role.size();
  while (end > 0 && role[end - 1] >= '0' && role[end - 1] <= '9') --end;
  return std::string(role.substr(0, end));
}

class StandoffParser {
 public:
  StandoffParser(const StandoffFilePair &pair, const SentenceSplitter &splitter,
                 std::string doc_id) {
    doc_.doc_id = std::move(doc_id);
    doc_.text = NoteText(pair.text);
    doc_.sentences = splitter(doc_.text);
    ann_ = pair.ann;
  }

  Document Parse() {
    std::istringstream in(ann_);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (raw.find_first_not_of(" \t") == std::string::npos) continue;
      ParseLine(raw, line_no);
    }
    Materialize();
    return std::move(doc_);
  }

 private:
  [[noreturn]] void Fail(const std::string &code, int line, const std::string &why) {
    throw StandoffError(code, line, why);
  }

  void Claim(const std::string &id, int line) {
    if (!ids_.insert(id).second) Fail("MALFORMED_LINE", line, "duplicate id " + id);
  }

  void ParseLine(const std::string &line, int no) {
    const char kind = line[0];
    if (kind == '#') return;  // annotator notes
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) Fail("MALFORMED_LINE", no, "missing tab separator");
    const std::string id = line.substr(0, tab);
    if (id.size() < 2) Fail("MALFORMED_LINE", no, "missing record id");
    const std::string_view rest = std::string_view(line).substr(tab + 1);
    switch (kind) {
      case 'T':
        ParseTextBound(id, rest, no);
        break;
      case 'E':
        ParseEvent(id, rest, no);
        break;
      case 'A':
        ParseAttribute(id, rest, no);
        break;
      case 'R':
        ParseRelation(id, rest, no);
        break;
      default:
        Fail("MALFORMED_LINE", no, std::string("unsupported record kind '") + kind + "'");
    }
  }

  void ParseTextBound(const std::string &id, std::string_view rest, int no) {
    const std::size_t tab = rest.find('\t');
    if (tab == std::string_view::npos) Fail("MALFORMED_LINE", no, "T-line missing text field");
    const std::string_view header = rest.substr(0, tab);
    const std::string_view surface = rest.substr(tab + 1);
    if (header.find(';') != std::string_view::npos) {
      Fail("DISCONTINUOUS_SPAN", no, "fragmented spans are not supported");
    }
    auto fields = SplitWhitespace(header);
    if (fields.size() != 3) Fail("MALFORMED_LINE", no, "expected '<Type> <start> <end>'");
    const std::string type(fields[0]);
    if (!ParseEventType(type) && !ParseArgumentType(type)) {
      Fail("MALFORMED_LINE", no, "unknown span type '" + type + "'");
    }
    std::size_t start = 0;
    std::size_t end = 0;
    if (!ParseOffset(fields[1], start) || !ParseOffset(fields[2], end)) {
      Fail("MALFORMED_LINE", no, "offsets are not non-negative integers");
    }
    if (start >= end || end > doc_.text.size()) {
      Fail("MALFORMED_LINE", no,
           "offsets [" + std::to_string(start) + "," + std::to_string(end) +
               ") outside note of length " + std::to_string(doc_.text.size()));
    }
    Span span = MakeSpan(doc_.text, start, end);
    if (FoldBreaks(span.text) != FoldBreaks(surface)) {
      Fail("OFFSET_TEXT_MISMATCH", no,
           "text '" + std::string(surface) + "' != note substring '" + span.text + "'");
    }
    Claim(id, no);
    text_bounds_.emplace(id, TextBound{no, type, std::move(span)});
    text_bound_order_.push_back(id);
  }

  void ParseEvent(const std::string &id, std::string_view rest, int no) {
    auto fields = SplitWhitespace(rest);
    if (fields.empty()) Fail("MALFORMED_LINE", no, "E-line has no trigger");
    EventRecord rec;
    rec.line = no;
    rec.id = id;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::size_t colon = fields[i].find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == fields[i].size()) {
        Fail("MALFORMED_LINE", no, "expected Role:Id, got '" + std::string(fields[i]) + "'");
      }
      std::string role(fields[i].substr(0, colon));
      std::string ref(fields[i].substr(colon + 1));
      if (i == 0) {
        if (!ParseEventType(role)) Fail("MALFORMED_LINE", no, "unknown event type '" + role + "'");
        rec.trigger_ref = ref;
      } else {
        if (!ParseArgumentType(RoleBase(role))) {
          Fail("MALFORMED_LINE", no, "unknown argument role '" + role + "'");
        }
        rec.roles.emplace_back(RoleBase(role), ref);
      }
    }
    Claim(id, no);
    events_.push_back(std::move(rec));
  }

  void ParseAttribute(const std::string &id, std::string_view rest, int no) {
    auto fields = SplitWhitespace(rest);
    if (fields.size() != 3) Fail("MALFORMED_LINE", no, "expected '<Name> <E-id> <value>'");
    auto type = ParseArgumentType(fields[0]);
    if (!type || !IsLabeled(*type)) {
      Fail("MALFORMED_LINE", no, "'" + std::string(fields[0]) + "' is not a labeled argument");
    }
    auto label = ParseSubtype(*type, fields[2]);
    if (!label) {
      Fail("INVALID_LABEL", no,
           "'" + std::string(fields[2]) + "' is not a " + std::string(Name(*type)) + " label");
    }
    Claim(id, no);
    attributes_.push_back({no, *type, std::string(fields[1]), *label});
  }

  void ParseRelation(const std::string &id, std::string_view rest, int no) {
    auto fields = SplitWhitespace(rest);
    if (fields.size() != 3) Fail("MALFORMED_LINE", no, "expected '<Type> Arg1:<id> Arg2:<id>'");
    auto type = ParseRelationType(fields[0]);
    if (!type) Fail("MALFORMED_LINE", no, "unknown relation type '" + std::string(fields[0]) + "'");
    if (!fields[1].starts_with("Arg1:") || !fields[2].starts_with("Arg2:")) {
      Fail("MALFORMED_LINE", no, "relation arguments must be Arg1:<id> Arg2:<id>");
    }
    Claim(id, no);
    relations_.push_back(
        {no, *type, std::string(fields[1].substr(5)), std::string(fields[2].substr(5))});
  }

  const TextBound &Bound(const std::string &ref, int no) {
    auto it = text_bounds_.find(ref);
    if (it == text_bounds_.end()) Fail("DANGLING_REFERENCE", no, "no text-bound " + ref);
    return it->second;
  }

  void Materialize() {
    std::map<std::string, std::size_t> event_index;    // E id -> doc_.events index
    std::map<std::string, std::string> trigger_owner;  // T id -> event id
    std::set<std::string> used_bounds;

    for (const EventRecord &rec : events_) {
      const TextBound &trig = Bound(rec.trigger_ref, rec.line);
      auto type = ParseEventType(trig.type);
      if (!type) {
        Fail("MALFORMED_LINE", rec.line, rec.trigger_ref + " is a " + trig.type + " span, not a trigger");
      }
      Event e;
      e.id = rec.id;
      e.type = *type;
      e.trigger = trig.span;
      used_bounds.insert(rec.trigger_ref);
      trigger_owner.emplace(rec.trigger_ref, rec.id);
      for (const auto &[role, ref] : rec.roles) {
        const TextBound &arg = Bound(ref, rec.line);
        if (arg.type != role) {
          Fail("MALFORMED_LINE", rec.line,
               "role " + role + " points at " + ref + " of type " + arg.type);
        }
        used_bounds.insert(ref);
        e.arguments.push_back(Argument{*ParseArgumentType(role), arg.span, std::nullopt});
      }
      event_index.emplace(rec.id, doc_.events.size());
      doc_.events.push_back(std::move(e));
    }

    // Trigger-typed spans not bound by any E-line stand alone as events.
    for (const std::string &tid : text_bound_order_) {
      if (used_bounds.count(tid)) continue;
      const TextBound &tb = text_bounds_.at(tid);
      auto type = ParseEventType(tb.type);
      if (!type) Fail("ORPHAN_SPAN", tb.line, tid + " (" + tb.type + ") is not attached to an event");
      trigger_owner.emplace(tid, tid);
      event_index.emplace(tid, doc_.events.size());
      doc_.events.push_back(Event{tid, *type, tb.span, {}});
    }

    // Labels pair up with labeled-argument spans of the same type in order.
    for (const AttributeRecord &a : attributes_) {
      auto it = event_index.find(a.target);
      if (it == event_index.end()) Fail("DANGLING_REFERENCE", a.line, "no event " + a.target);
      Event &e = doc_.events[it->second];
      bool attached = false;
      for (Argument &arg : e.arguments) {
        if (arg.type == a.type && !arg.label) {
          arg.label = a.label;
          attached = true;
          break;
        }
      }
      if (!attached) e.arguments.push_back(Argument{a.type, std::nullopt, a.label});
    }

    auto resolve = [&](const std::string &ref, int line) -> std::string {
      if (event_index.count(ref)) return ref;
      auto it = trigger_owner.find(ref);
      if (it != trigger_owner.end()) return it->second;
      Fail("DANGLING_REFERENCE", line, "no event " + ref);
    };
    for (const RelationRecord &r : relations_) {
      doc_.relations.push_back({r.type, resolve(r.arg1, r.line), resolve(r.arg2, r.line)});
    }
  }

  Document doc_;
  std::string ann_;
  std::set<std::string> ids_;
  std::map<std::string, TextBound> text_bounds_;
  std::vector<std::string> text_bound_order_;
  std::vector<EventRecord> events_;
  std::vector<AttributeRecord> attributes_;
  std::vector<RelationRecord> relations_;
};

}  // namespace

Document ParseStandoff(const StandoffFilePair &pair, const SentenceSplitter &splitter,
                       std::string doc_id) {
  return StandoffParser(pair, splitter, std::move(doc_id)).Parse();
}

Document ParseStandoff(const StandoffFilePair &pair, std::string doc_id) {
  return ParseStandoff(pair, SegmentSentences, std::move(doc_id));
}

StandoffFilePair WriteStandoff(const Document &doc) {
  std::ostringstream t_lines;
  std::ostringstream e_lines;
  std::ostringstream a_lines;
  std::ostringstream r_lines;
  int next_t = 0;
  int next_a = 0;
  std::map<std::string, std::string> event_ids;

  auto emit_bound = [&](std::string_view type, const Span &s) {
    if (s.start >= s.end || s.end > doc.text.size() ||
        doc.text.slice_view(s.start, s.end) != s.text) {
      throw Error("UNWRITABLE_SPAN", "span [" + std::to_string(s.start) + "," +
                                         std::to_string(s.end) + ") '" + s.text +
                                         "' does not match the note text");
    }
    const std::string id = "T" + std::to_string(++next_t);
    t_lines << id << '\t' << type << ' ' << s.start << ' ' << s.end << '\t' << FoldBreaks(s.text)
            << '\n';
    return id;
  };

  for (std::size_t i = 0; i < doc.events.size(); ++i) {
    const Event &e = doc.events[i];
    const std::string eid = "E" + std::to_string(i + 1);
    event_ids.emplace(e.id, eid);
    const std::string trigger_ref = emit_bound(Name(e.type), e.trigger);
    e_lines << eid << '\t' << Name(e.type) << ':' << trigger_ref;
    std::map<ArgumentType, int> role_count;
    for (const Argument &a : e.arguments) {
      if (!a.span) continue;
      const std::string ref = emit_bound(Name(a.type), *a.span);
      const int k = ++role_count[a.type];
      e_lines << ' ' << Name(a.type);
      if (k > 1) e_lines << k;
      e_lines << ':' << ref;
    }
    e_lines << '\n';
    for (const Argument &a : e.arguments) {
      if (!a.label) continue;
      a_lines << 'A' << ++next_a << '\t' << Name(a.type) << ' ' << eid << ' ' << Name(*a.label)
              << '\n';
    }
  }
  int next_r = 0;
  for (const Relation &r : doc.relations) {
    auto h = event_ids.find(r.head);
    auto t = event_ids.find(r.tail);
    if (h == event_ids.end() || t == event_ids.end()) {
      throw Error("DANGLING_REFERENCE", "relation endpoint " + r.head + "/" + r.tail);
    }
    r_lines << 'R' << ++next_r << '\t' << Name(r.type) << " Arg1:" << h->second
            << " Arg2:" << t->second << '\n';
  }
  return {doc.text.str(), t_lines.str() + e_lines.str() + a_lines.str() + r_lines.str()};
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IO_ERROR", "cannot write " + path.string());
  out << content;
  if (!out) throw Error("IO_ERROR", "write failed for " + path.string());
}

std::vector<std::string> ListCorpus(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("IO_ERROR", "not a directory: " + dir.string());
  std::set<std::string> txt;
  std::set<std::string> ann;
  for (const auto &entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".txt") txt.insert(entry.path().stem().string());
    if (ext == ".ann") ann.insert(entry.path().stem().string());
  }
  if (ec) throw Error("IO_ERROR", "cannot list " + dir.string());
  for (const auto &name : txt) {
    if (!ann.count(name)) throw Error("MISSING_ANN", name + ".txt has no .ann");
  }
  for (const auto &name : ann) {
    if (!txt.count(name)) throw Error("MISSING_TXT", name + ".ann has no .txt");
  }
  return {txt.begin(), txt.end()};
}

StandoffFilePair ReadPair(const std::filesystem::path &dir, const std::string &name) {
  return {ReadFile(dir / (name + ".txt")), ReadFile(dir / (name + ".ann"))};
}

Document ReadDocument(const std::filesystem::path &dir, const std::string &name,
                      const SentenceSplitter &splitter) {
  return ParseStandoff(ReadPair(dir, name), splitter, name);
}

void WriteDocument(const std::filesystem::path &dir, const Document &doc) {
  const StandoffFilePair pair = WriteStandoff(doc);
  WriteFile(dir / (doc.doc_id + ".txt"), pair.text);
  WriteFile(dir / (doc.doc_id + ".ann"), pair.ann);
}

}  // namespace cacer
