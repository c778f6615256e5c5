#include "commands.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "cacer/bootstrap.h"
#include "cacer/context_window.h"
#include "cacer/error.h"
#include "cacer/glm_codec.h"
#include "cacer/scorer.h"
#include "cacer/serialize.h"
#include "cacer/standoff.h"
#include "cacer/synth.h"
#include "cacer/validate.h"
#include "manifest.h"

namespace cacer::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Notes held in memory at once by the streaming commands.
constexpr std::size_t kChunk = 256;

std::string ManifestPath(const std::string &explicit_path, const std::string &fallback) {
  return explicit_path.empty() ? fallback : explicit_path;
}

// Output file opened for writing; parent directories are created.
std::ofstream OpenOut(const std::string &path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("IO_ERROR", "cannot write " + path);
  return f;
}

std::uint64_t DefaultSeed(const std::optional<std::uint64_t> &flag) {
  if (flag) return *flag;
  if (const char *env = std::getenv(kSeedEnv)) {
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0') {
      throw Error("USAGE", std::string(kSeedEnv) + " must be a non-negative integer");
    }
    return v;
  }
  return 0;
}

std::map<std::string, std::size_t> SentenceOfEvents(const Document &doc) {
  return TriggerSentences(doc);
}

// Sliding windows of 1..max_sent sentences within the token limit that hold
// at least one Problem and one other event.
std::vector<ContextWindow> SlidingWindows(const Document &doc, const WindowLimits &limits) {
  std::vector<ContextWindow> out;
  for (std::size_t a = 0; a < doc.sentences.size(); ++a) {
    for (std::size_t len = 1; len <= limits.max_sentences && a + len <= doc.sentences.size(); ++len) {
      ContextWindow w = MakeWindow(doc, a, a + len - 1);
      if (w.token_count > limits.max_tokens) break;
      std::size_t problems = 0;
      for (const WindowEvent &e : w.events) problems += e.event.type == EventType::kProblem;
      if (problems == 0 || w.events.size() < 2) continue;
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::string WindowId(const ContextWindow &w) {
  return w.doc_id + "#w" + std::to_string(w.first) + "-" + std::to_string(w.last);
}

std::string PairId(const std::string &doc_id, const std::string &head, const std::string &tail) {
  return doc_id + "#" + head + "->" + tail;
}

// QA candidates: every Drug-Problem pair and each unordered Problem pair once
// (both directions are options of the same question).
std::vector<Candidate> QaCandidates(const Document &doc, const WindowLimits &limits) {
  CandidateSet set = EnumerateCandidatePairs(doc, EstimateSubwordTokens, limits);
  std::vector<Candidate> out;
  for (Candidate &c : set.pairs) {
    const Event *h = doc.FindEvent(c.head);
    const Event *t = doc.FindEvent(c.tail);
    if (h->type == EventType::kProblem &&
        std::tie(h->trigger.start, h->trigger.end) > std::tie(t->trigger.start, t->trigger.end)) {
      continue;
    }
    out.push_back(std::move(c));
  }
  return out;
}

QaMapping ParseQaMapping(const std::string &spec) {
  QaMapping m = QaMapping::Default();
  if (spec.empty()) return m;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    const std::size_t eq = item.find('=');
    if (eq != 1 || item[0] < 'A' || item[0] > 'F') {
      throw Error("USAGE", "--qa-mapping items look like C=Worsens or F=none");
    }
    const std::string value = item.substr(2);
    auto &slot = m.drug_problem[static_cast<std::size_t>(item[0] - 'A')];
    if (value == "none") {
      slot.reset();
    } else {
      const auto r = ParseRelationType(value);
      if (!r || *r == RelationType::kPip) throw Error("USAGE", "no Drug-Problem relation '" + value + "'");
      slot = *r;
    }
  }
  std::set<RelationType> seen;
  for (const auto &slot : m.drug_problem) {
    if (slot && !seen.insert(*slot).second) {
      throw Error("USAGE", "--qa-mapping assigns " + std::string(Name(*slot)) + " to two letters");
    }
  }
  if (seen.size() != 5) throw Error("USAGE", "--qa-mapping must cover all five Drug-Problem relations");
  return m;
}

std::map<std::string, std::string> ReadPredictions(const std::string &path) {
  std::map<std::string, std::string> out;
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("IO_ERROR", "cannot read " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("id").get<std::string>()] = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw Error("MALFORMED_PREDICTIONS", path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void WriteIssue(std::ostream &os, const std::string &id, const DecodeIssue &issue) {
  ordered_json j;
  j["id"] = id;
  j["code"] = issue.code;
  j["detail"] = issue.detail;
  os << j.dump() << "\n";
}

}  // namespace

int RunValidate(const ValidateArgs &a, std::ostream &out) {
  RunManifest m;
  m.command = "validate";
  m.inputs = {a.corpus};
  m.config = std::string("strict=") + (a.strict ? "1" : "0");
  const std::vector<std::string> names = ListCorpus(a.corpus);
  std::ofstream report;
  if (!a.report.empty()) {
    report = OpenOut(a.report);
    m.outputs.push_back(a.report);
  }
  std::size_t errors = 0;
  std::size_t warnings = 0;
  for (const std::string &name : names) {
    std::vector<Violation> vs;
    try {
      vs = ValidateDocument(ReadDocument(a.corpus, name));
    } catch (const StandoffError &e) {
      vs.push_back({Severity::kError, e.code(), "", e.what()});
    }
    for (const Violation &v : vs) {
      (v.severity == Severity::kError ? errors : warnings) += 1;
      out << name << "\t" << Name(v.severity) << "\t" << v.code << "\t" << v.element << "\t"
          << v.detail << "\n";
    }
    if (report.is_open()) report << ViolationsJsonl(name, vs);
  }
  out << "checked " << names.size() << " notes: " << errors << " errors, " << warnings
      << " warnings\n";
  m.exit_code = (errors > 0 || (a.strict && warnings > 0)) ? kFailed : kOk;
  m.Write(ManifestPath(a.manifest, a.report.empty() ? "cacer-validate.manifest.json"
                                                    : a.report + ".manifest.json"));
  return m.exit_code;
}

int RunScore(const ScoreArgs &a, std::ostream &out, bool iaa) {
  RunManifest m;
  m.command = iaa ? "iaa" : "score";
  m.inputs = {a.gold, a.pred};
  MatchOptions opts;
  opts.exact_spans = a.exact;
  opts.strategy = a.optimal ? MatchStrategy::kOptimal : MatchStrategy::kGreedy;
  m.config = std::string("exact=") + (a.exact ? "1" : "0") + ";optimal=" + (a.optimal ? "1" : "0") +
             ";min_f1=" + (a.min_f1 ? std::to_string(*a.min_f1) : "none");

  const std::vector<std::string> gold_names = ListCorpus(a.gold);
  const std::vector<std::string> pred_names = ListCorpus(a.pred);
  if (gold_names != pred_names) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(gold_names.begin(), gold_names.end(), pred_names.begin(),
                                  pred_names.end(), std::back_inserter(diff));
    throw Error("UNALIGNED_CORPORA", "note sets differ, e.g. '" + diff.front() + "'");
  }

  std::ofstream per_note;
  if (!a.per_note.empty()) per_note = OpenOut(a.per_note);
  CategoryCounts total{};
  for (std::size_t begin = 0; begin < gold_names.size(); begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, gold_names.size());
    std::vector<Document> gold;
    std::vector<Document> pred;
    try {
      for (std::size_t i = begin; i < end; ++i) {
        gold.push_back(ReadDocument(a.gold, gold_names[i]));
        pred.push_back(ReadDocument(a.pred, gold_names[i]));
      }
    } catch (const StandoffError &e) {
      out << "unreadable annotation: " << e.what() << "\n";
      return kFailed;
    }
    total += Score(gold, pred, opts).categories;
    if (per_note.is_open()) per_note << FormatNoteScores(PerNoteF1(gold, pred, a.per_note_row, opts));
  }

  const ScoreReport report = MakeReport(total);
  const std::string table = ScoreReportTable(report);
  out << table;
  if (!a.report.empty()) {
    const std::string json_path = a.report + ".json";
    const std::string txt_path = a.report + ".txt";
    WriteFile(json_path, ScoreReportJson(report, opts));
    WriteFile(txt_path, table);
    m.outputs = {json_path, txt_path};
  }
  if (!a.per_note.empty()) m.outputs.push_back(a.per_note);
  m.exit_code = kOk;
  if (a.min_f1 && report.Find("Overall")->counts.f1() < *a.min_f1) {
    out << "overall F1 below threshold " << *a.min_f1 << "\n";
    m.exit_code = kFailed;
  }
  m.Write(ManifestPath(a.manifest, a.report.empty() ? "cacer-" + m.command + ".manifest.json"
                                                    : a.report + ".manifest.json"));
  return m.exit_code;
}

int RunSigtest(const SigtestArgs &a, std::ostream &out) {
  RunManifest m;
  m.command = "sigtest";
  m.inputs = {a.scores_a, a.scores_b};
  BootstrapOptions opts;
  opts.iterations = a.iterations;
  opts.seed = DefaultSeed(a.seed);
  if (a.mode == "auto") {
    opts.mode = ResampleMode::kAuto;
  } else if (a.mode == "montecarlo") {
    opts.mode = ResampleMode::kMonteCarlo;
  } else if (a.mode == "exhaustive") {
    opts.mode = ResampleMode::kExhaustive;
  } else {
    throw Error("USAGE", "--mode must be auto, montecarlo or exhaustive");
  }
  m.seed = opts.seed;
  m.config = "iterations=" + std::to_string(a.iterations) + ";mode=" + a.mode;

  auto load = [](const std::string &path) {
    std::vector<NoteScore> s = ParseNoteScores(ReadFile(path));
    std::sort(s.begin(), s.end(),
              [](const NoteScore &x, const NoteScore &y) { return x.doc_id < y.doc_id; });
    return s;
  };
  const std::vector<NoteScore> sa = load(a.scores_a);
  const std::vector<NoteScore> sb = load(a.scores_b);
  const SigTestResult r = BootstrapTest(sa, sb, opts);
  const std::string json = SigTestJson(r);
  out << json;
  if (!a.out.empty()) {
    WriteFile(a.out, json);
    m.outputs = {a.out};
  }
  m.Write(ManifestPath(a.manifest, a.out.empty() ? "cacer-sigtest.manifest.json"
                                                 : a.out + ".manifest.json"));
  return kOk;
}

int RunWindows(const WindowsArgs &a, std::ostream &out) {
  RunManifest m;
  m.command = "windows";
  m.inputs = {a.corpus};
  const WindowLimits limits{a.max_sent, a.max_tokens};
  m.config = "max_sent=" + std::to_string(a.max_sent) + ";max_tokens=" + std::to_string(a.max_tokens);
  const std::vector<std::string> names = ListCorpus(a.corpus);
  std::ofstream pairs;
  if (!a.out.empty()) {
    pairs = OpenOut(a.out);
    m.outputs.push_back(a.out);
  }
  CoverageStats stats;
  std::size_t candidates = 0;
  std::size_t excluded = 0;
  for (std::size_t begin = 0; begin < names.size(); begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, names.size());
    std::vector<Document> docs;
    try {
      for (std::size_t i = begin; i < end; ++i) docs.push_back(ReadDocument(a.corpus, names[i]));
    } catch (const StandoffError &e) {
      out << "unreadable annotation: " << e.what() << "\n";
      return kFailed;
    }
    stats += CoverageReport(docs, EstimateSubwordTokens, limits);
    const std::vector<CandidateSet> sets = EnumerateCandidatePairs(docs, EstimateSubwordTokens, limits);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      excluded += sets[d].excluded_too_long + sets[d].excluded_too_many_tokens;
      for (const Candidate &c : sets[d].pairs) {
        ++candidates;
        if (!pairs.is_open()) continue;
        ordered_json j;
        j["id"] = PairId(docs[d].doc_id, c.head, c.tail);
        j["doc_id"] = docs[d].doc_id;
        j["head"] = c.head;
        j["tail"] = c.tail;
        j["first_sentence"] = c.window.first;
        j["last_sentence"] = c.window.last;
        j["tokens"] = c.window.token_count;
        ordered_json gold = nullptr;
        for (const Relation &r : docs[d].relations) {
          if (r.head == c.head && r.tail == c.tail) gold = Name(r.type);
        }
        j["gold"] = gold;
        pairs << j.dump() << "\n";
      }
    }
  }
  const std::string json = CoverageJson(stats, limits);
  if (!a.stats.empty()) {
    WriteFile(a.stats, json);
    m.outputs.push_back(a.stats);
  }
  out << "candidate pairs: " << candidates << " (excluded by limits: " << excluded << ")\n";
  out << "gold relations: " << stats.overall.total << ", coverage " << stats.coverage()
      << ", intra-sentence fraction " << stats.intra_fraction() << "\n";
  m.Write(ManifestPath(a.manifest, a.out.empty() ? "cacer-windows.manifest.json"
                                                 : a.out + ".manifest.json"));
  return kOk;
}

int RunEncode(const CodecArgs &a, std::ostream &out) {
  RunManifest m;
  m.command = "encode";
  m.inputs = {a.corpus};
  m.outputs = {a.out};
  const WindowLimits limits{a.max_sent, a.max_tokens};
  m.config = "format=" + a.format + ";max_sent=" + std::to_string(a.max_sent) +
             ";max_tokens=" + std::to_string(a.max_tokens) + ";qa_mapping=" + a.qa_mapping;
  if (a.format != "events" && a.format != "marker" && a.format != "qa") {
    throw Error("USAGE", "--format must be events, marker or qa");
  }
  const QaMapping mapping = ParseQaMapping(a.qa_mapping);
  const std::vector<std::string> names = ListCorpus(a.corpus);
  std::ofstream os = OpenOut(a.out);
  std::size_t records = 0;
  for (const std::string &name : names) {
    Document doc;
    try {
      doc = ReadDocument(a.corpus, name);
    } catch (const StandoffError &e) {
      out << "unreadable annotation: " << e.what() << "\n";
      return kFailed;
    }
    if (a.format == "events") {
      const auto sentence_of = SentenceOfEvents(doc);
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        std::vector<Event> events;
        for (const Event &e : doc.events) {
          if (sentence_of.at(e.id) == s) events.push_back(e);
        }
        ordered_json j;
        j["id"] = doc.doc_id + "#s" + std::to_string(s);
        j["doc_id"] = doc.doc_id;
        j["input"] = RenderEventPrompt(doc.sentences[s].text);
        j["target"] = EncodeEvents(doc.sentences[s], events);
        os << j.dump() << "\n";
        ++records;
      }
    } else if (a.format == "marker") {
      for (const ContextWindow &w : SlidingWindows(doc, limits)) {
        std::vector<Relation> inside;
        for (const Relation &r : doc.relations) {
          if (PassesValidityFilter(w, r)) inside.push_back(r);
        }
        ordered_json j;
        j["id"] = WindowId(w);
        j["doc_id"] = doc.doc_id;
        j["input"] = RenderMarkerPrompt(w);
        j["target"] = EncodeMarkerOutput(w, inside);
        os << j.dump() << "\n";
        ++records;
      }
    } else {
      for (const Candidate &c : QaCandidates(doc, limits)) {
        const Event &h = *doc.FindEvent(c.head);
        const Event &t = *doc.FindEvent(c.tail);
        const QaPrompt p = BuildQaPrompt(h, t, c.window);
        ordered_json j;
        j["id"] = PairId(doc.doc_id, c.head, c.tail);
        j["doc_id"] = doc.doc_id;
        j["input"] = p.rendered;
        j["target"] = std::string("(") + GoldQaLetter(p.kind, h, t, doc.relations, mapping) + ")";
        os << j.dump() << "\n";
        ++records;
      }
    }
  }
  out << "wrote " << records << " " << a.format << " records to " << a.out << "\n";
  m.Write(ManifestPath(a.manifest, a.out + ".manifest.json"));
  return kOk;
}

int RunDecode(const CodecArgs &a, std::ostream &out) {
  RunManifest m;
  m.command = "decode";
  m.inputs = {a.corpus, a.predictions};
  m.outputs = {a.out_dir};
  const WindowLimits limits{a.max_sent, a.max_tokens};
  m.config = "format=" + a.format + ";max_sent=" + std::to_string(a.max_sent) +
             ";max_tokens=" + std::to_string(a.max_tokens) + ";qa_mapping=" + a.qa_mapping;
  if (a.format != "events" && a.format != "marker" && a.format != "qa") {
    throw Error("USAGE", "--format must be events, marker or qa");
  }
  const QaMapping mapping = ParseQaMapping(a.qa_mapping);
  const std::map<std::string, std::string> predictions = ReadPredictions(a.predictions);
  const std::vector<std::string> names = ListCorpus(a.corpus);
  fs::create_directories(a.out_dir);
  std::ofstream issues_file;
  if (!a.issues.empty()) {
    issues_file = OpenOut(a.issues);
    m.outputs.push_back(a.issues);
  }
  std::size_t issue_count = 0;
  std::size_t missing = 0;
  auto issue = [&](const std::string &id, const DecodeIssue &i) {
    ++issue_count;
    if (issues_file.is_open()) WriteIssue(issues_file, id, i);
  };
  auto lookup = [&](const std::string &id) -> const std::string * {
    auto it = predictions.find(id);
    if (it != predictions.end()) return &it->second;
    ++missing;
    return nullptr;
  };

  for (const std::string &name : names) {
    Document doc;
    try {
      doc = ReadDocument(a.corpus, name);
    } catch (const StandoffError &e) {
      out << "unreadable annotation: " << e.what() << "\n";
      return kFailed;
    }
    Document pred = doc;
    pred.source = "predicted";
    if (a.format == "events") {
      pred.events.clear();
      pred.relations.clear();
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const std::string id = doc.doc_id + "#s" + std::to_string(s);
        const std::string *output = lookup(id);
        if (!output) continue;
        DecodedEvents d = DecodeEvents(doc.sentences[s], *output, "S" + std::to_string(s) + "E");
        for (const DecodeIssue &i : d.issues) issue(id, i);
        for (Event &e : d.events) pred.events.push_back(std::move(e));
      }
    } else if (a.format == "marker") {
      pred.relations.clear();
      std::set<std::tuple<RelationType, std::string, std::string>> seen;
      for (const ContextWindow &w : SlidingWindows(doc, limits)) {
        const std::string id = WindowId(w);
        const std::string *output = lookup(id);
        if (!output) continue;
        const DecodedRelations d = DecodeMarkerOutput(*output, w);
        for (const DecodeIssue &i : d.issues) issue(id, i);
        for (const Relation &r : d.relations) {
          if (PassesValidityFilter(w, r) && seen.insert({r.type, r.head, r.tail}).second) {
            pred.relations.push_back(r);
          }
        }
      }
    } else {
      pred.relations.clear();
      for (const Candidate &c : QaCandidates(doc, limits)) {
        const std::string id = PairId(doc.doc_id, c.head, c.tail);
        const std::string *output = lookup(id);
        if (!output) continue;
        const Event &h = *doc.FindEvent(c.head);
        const Event &t = *doc.FindEvent(c.tail);
        const PairKind kind =
            h.type == EventType::kDrug ? PairKind::kDrugProblem : PairKind::kProblemProblem;
        try {
          if (auto r = ParseQaAnswer(*output, kind, h, t, mapping)) pred.relations.push_back(*r);
        } catch (const Error &e) {
          issue(id, {e.code(), e.what()});
        }
      }
    }
    WriteDocument(a.out_dir, pred);
  }
  out << "decoded " << names.size() << " notes: " << issue_count << " issues, " << missing
      << " records without a prediction\n";
  m.Write(ManifestPath(a.manifest, (fs::path(a.out_dir) / "manifest.json").string()));
  return kOk;
}

int RunGen(const GenArgs &a, std::ostream &out) {
  RunManifest m;
  m.command = "gen";
  GenConfig cfg;
  if (!a.config.empty()) {
    cfg = GenConfigFromJson(ReadFile(a.config));
    m.inputs.push_back(a.config);
  }
  if (!a.lexicon_dir.empty()) {
    cfg.lexicons = Lexicons::Load(a.lexicon_dir);
    m.inputs.push_back(a.lexicon_dir);
  }
  if (a.seed) {
    cfg.seed = *a.seed;
  } else if (a.config.empty() || std::getenv(kSeedEnv)) {
    cfg.seed = DefaultSeed(std::nullopt);
  }
  if (a.n_notes) cfg.n_notes = *a.n_notes;
  cfg.Validate();
  m.seed = cfg.seed;
  m.config = GenConfigToJson(cfg) + "lexicons=" + std::to_string(cfg.Digest());
  m.outputs = {a.out_dir};

  fs::create_directories(a.out_dir);
  WriteFile(fs::path(a.out_dir) / "gen_config.json", GenConfigToJson(cfg));
  std::size_t relations = 0;
  std::size_t events = 0;
  for (std::size_t begin = 0; begin < cfg.n_notes; begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, cfg.n_notes);
    std::vector<Document> docs(end - begin);
    std::vector<std::exception_ptr> failures(docs.size());
    const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        docs[i] = GenerateNote(cfg, begin + static_cast<std::size_t>(i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
    for (const auto &f : failures) {
      if (f) std::rethrow_exception(f);
    }
    for (const Document &d : docs) {
      WriteDocument(a.out_dir, d);
      events += d.events.size();
      relations += d.relations.size();
    }
  }
  out << "generated " << cfg.n_notes << " notes (" << events << " events, " << relations
      << " relations) in " << a.out_dir << "\n";
  m.Write(ManifestPath(a.manifest, (fs::path(a.out_dir) / "manifest.json").string()));
  return kOk;
}

}  // namespace cacer::cli
