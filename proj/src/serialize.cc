#include "cacer/serialize.h"

#include <cstdio>
#include <cstdlib>
#include <map>

#include <json.hpp>

#include "cacer/error.h"

namespace cacer {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kReportFormat = "cacer-score-report";
constexpr int kReportVersion = 1;

ordered_json RowJson(const ReportRow &r) {
  ordered_json j;
  j["name"] = r.name;
  j["group"] = RowGroup(r.name);
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["precision"] = r.counts.precision();
  j["recall"] = r.counts.recall();
  j["f1"] = r.counts.f1();
  return j;
}

std::string Fixed3(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string Pad(std::string s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

template <typename E, std::size_t N, typename NameOf>
E EnumByName(const std::string &name, const std::array<E, N> &values, NameOf name_of,
             std::string_view what) {
  for (E v : values) {
    if (name_of(v) == name) return v;
  }
  throw Error("INVALID_CONFIG", "unknown " + std::string(what) + " '" + name + "'");
}

}  // namespace

std::string_view RowGroup(std::string_view row_name) {
  if (row_name == "Events" || row_name == "Relations" || row_name == "Overall") return "summary";
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    const auto c = static_cast<Category>(i);
    if (Name(c) != row_name) continue;
    if (c == Category::kDrugTrigger || c == Category::kProblemTrigger) return "trigger";
    return IsEventCategory(c) ? "argument" : "relation";
  }
  return "unknown";
}

std::string ScoreReportJson(const ScoreReport &report, const MatchOptions &opts) {
  ordered_json j;
  j["format"] = kReportFormat;
  j["version"] = kReportVersion;
  j["matching"] = {{"strategy", opts.strategy == MatchStrategy::kGreedy ? "greedy" : "optimal"},
                   {"exact_spans", opts.exact_spans}};
  j["rows"] = ordered_json::array();
  for (const ReportRow &r : report.rows) j["rows"].push_back(RowJson(r));
  return j.dump(2) + "\n";
}

std::string ScoreReportTable(const ScoreReport &report) {
  struct Line {
    std::string group;
    std::string name;
    const Counts *counts;
  };
  std::vector<Line> lines;
  for (const ReportRow &r : report.rows) {
    const std::string_view g = RowGroup(r.name);
    if (g == "trigger") lines.push_back({"Trigger", r.name, &r.counts});
    if (g == "argument") lines.push_back({"Argument", r.name, &r.counts});
  }
  if (const ReportRow *r = report.Find("Events")) lines.push_back({"Event", "Overall", &r->counts});
  for (const ReportRow &r : report.rows) {
    if (RowGroup(r.name) == "relation") lines.push_back({"Relation", r.name, &r.counts});
  }
  if (const ReportRow *r = report.Find("Relations")) lines.push_back({"Relation", "Overall", &r->counts});
  if (const ReportRow *r = report.Find("Overall")) lines.push_back({"All", "Overall", &r->counts});

  std::string out = Pad("Group", 10, false) + Pad("Category", 17, false) + Pad("TP", 8, true) +
                    Pad("FP", 8, true) + Pad("FN", 8, true) + Pad("P", 8, true) +
                    Pad("R", 8, true) + Pad("F1", 8, true) + "\n";
  std::string prev;
  for (const Line &l : lines) {
    if (!prev.empty() && l.group != prev && l.name != "Overall") out += "\n";
    if (l.group == "All") out += "\n";
    prev = l.group;
    out += Pad(l.group, 10, false) + Pad(l.name, 17, false) +
           Pad(std::to_string(l.counts->tp), 8, true) + Pad(std::to_string(l.counts->fp), 8, true) +
           Pad(std::to_string(l.counts->fn), 8, true) + Pad(Fixed3(l.counts->precision()), 8, true) +
           Pad(Fixed3(l.counts->recall()), 8, true) + Pad(Fixed3(l.counts->f1()), 8, true) + "\n";
  }
  return out;
}

ScoreReport ParseScoreReportJson(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != kReportFormat) throw Error("MALFORMED_REPORT", "not a score report");
    CategoryCounts counts{};
    for (const json &row : j.at("rows")) {
      const std::string name = row.at("name").get<std::string>();
      for (std::size_t i = 0; i < kNumCategories; ++i) {
        if (Name(static_cast<Category>(i)) != name) continue;
        counts[i] = {row.at("tp").get<std::size_t>(), row.at("fp").get<std::size_t>(),
                     row.at("fn").get<std::size_t>()};
      }
    }
    return MakeReport(counts);
  } catch (const json::exception &e) {
    throw Error("MALFORMED_REPORT", e.what());
  }
}

std::string SigTestJson(const SigTestResult &r) {
  ordered_json j;
  j["notes"] = r.a.size();
  j["observed_difference"] = r.observed_difference;
  j["p_value"] = r.p_value;
  j["significant"] = r.significant();
  j["iterations"] = r.iterations;
  j["resamples"] = r.resamples;
  j["exhaustive"] = r.exhaustive;
  j["seed"] = r.seed;
  return j.dump(2) + "\n";
}

std::vector<NoteScore> ParseNoteScores(std::string_view tsv) {
  std::vector<NoteScore> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < tsv.size()) {
    std::size_t nl = tsv.find('\n', pos);
    if (nl == std::string_view::npos) nl = tsv.size();
    std::string_view line = tsv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw Error("MALFORMED_SCORES", "line " + std::to_string(line_no) + ": expected doc_id<TAB>score");
    }
    const std::string value(line.substr(tab + 1));
    char *end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw Error("MALFORMED_SCORES", "line " + std::to_string(line_no) + ": bad score '" + value + "'");
    }
    out.push_back({std::string(line.substr(0, tab)), v});
  }
  return out;
}

std::string FormatNoteScores(const std::vector<NoteScore> &scores) {
  std::string out;
  char buf[40];
  for (const NoteScore &s : scores) {
    std::snprintf(buf, sizeof buf, "%.17g", s.value);
    out += s.doc_id + "\t" + buf + "\n";
  }
  return out;
}

std::string ViolationsJsonl(std::string_view doc_id, const std::vector<Violation> &violations) {
  std::string out;
  for (const Violation &v : violations) {
    ordered_json j;
    j["doc_id"] = doc_id;
    j["severity"] = Name(v.severity);
    j["code"] = v.code;
    j["element"] = v.element;
    j["detail"] = v.detail;
    out += j.dump() + "\n";
  }
  return out;
}

std::string CoverageJson(const CoverageStats &stats, const WindowLimits &limits) {
  auto counts = [](const CoverageCounts &c) {
    ordered_json j;
    j["relations"] = c.total;
    j["within_limits"] = c.within_limits;
    j["intra_sentence"] = c.intra_sentence;
    j["coverage"] = Fraction(c.within_limits, c.total);
    j["intra_fraction"] = Fraction(c.intra_sentence, c.total);
    return j;
  };
  ordered_json j;
  j["max_sentences"] = limits.max_sentences;
  j["max_tokens"] = limits.max_tokens;
  j["overall"] = counts(stats.overall);
  j["by_type"] = ordered_json::object();
  for (RelationType t : kRelationTypes) {
    auto it = stats.by_type.find(t);
    if (it != stats.by_type.end()) j["by_type"][std::string(Name(t))] = counts(it->second);
  }
  return j.dump(2) + "\n";
}

GenConfig GenConfigFromJson(std::string_view text, GenConfig cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw Error("INVALID_CONFIG", e.what());
  }
  if (!j.is_object()) throw Error("INVALID_CONFIG", "config must be a JSON object");
  try {
    for (const auto &[key, value] : j.items()) {
      if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "n_notes") {
        cfg.n_notes = value.get<std::size_t>();
      } else if (key == "min_sentences") {
        cfg.min_sentences = value.get<std::size_t>();
      } else if (key == "max_sentences") {
        cfg.max_sentences = value.get<std::size_t>();
      } else if (key == "problem_fraction") {
        cfg.problem_fraction = value.get<double>();
      } else if (key == "attach") {
        for (const auto &[name, p] : value.items()) {
          const auto t = ParseArgumentType(name);
          if (!t) throw Error("INVALID_CONFIG", "unknown argument type '" + name + "'");
          cfg.attach[static_cast<std::size_t>(*t)] = p.get<double>();
        }
      } else if (key == "second_characteristic") {
        cfg.second_characteristic = value.get<double>();
      } else if (key == "subtypes") {
        for (const auto &[name, p] : value.items()) {
          std::optional<Subtype> s;
          for (ArgumentType owner :
               {ArgumentType::kAssertion, ArgumentType::kChange, ArgumentType::kSeverity}) {
            if (!s) s = ParseSubtype(owner, name);
          }
          if (!s) throw Error("INVALID_CONFIG", "unknown subtype '" + name + "'");
          cfg.subtypes[static_cast<std::size_t>(*s)] = p.get<double>();
        }
      } else if (key == "relation_mix") {
        for (const auto &[name, p] : value.items()) {
          const RelationType t = EnumByName(name, kRelationTypes,
                                            [](RelationType r) { return Name(r); }, "relation type");
          cfg.relation_mix[static_cast<std::size_t>(t)] = p.get<double>();
        }
      } else if (key == "intra_fraction") {
        cfg.intra_fraction = value.get<double>();
      } else if (key == "long_range_fraction") {
        cfg.long_range_fraction = value.get<double>();
      } else if (key == "relation_units") {
        cfg.relation_units = value.get<double>();
      } else if (key == "event_units") {
        cfg.event_units = value.get<double>();
      } else if (key == "filler_units") {
        cfg.filler_units = value.get<double>();
      } else {
        throw Error("INVALID_CONFIG", "unknown key '" + key + "'");
      }
    }
  } catch (const json::exception &e) {
    throw Error("INVALID_CONFIG", e.what());
  }
  return cfg;
}

std::string GenConfigToJson(const GenConfig &cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  j["n_notes"] = cfg.n_notes;
  j["min_sentences"] = cfg.min_sentences;
  j["max_sentences"] = cfg.max_sentences;
  j["problem_fraction"] = cfg.problem_fraction;
  ordered_json attach;
  for (std::size_t i = 0; i < cfg.attach.size(); ++i) {
    attach[std::string(Name(static_cast<ArgumentType>(i)))] = cfg.attach[i];
  }
  j["attach"] = attach;
  j["second_characteristic"] = cfg.second_characteristic;
  ordered_json subtypes;
  for (std::size_t i = 0; i < cfg.subtypes.size(); ++i) {
    subtypes[std::string(Name(static_cast<Subtype>(i)))] = cfg.subtypes[i];
  }
  j["subtypes"] = subtypes;
  ordered_json mix;
  for (RelationType t : kRelationTypes) {
    mix[std::string(Name(t))] = cfg.relation_mix[static_cast<std::size_t>(t)];
  }
  j["relation_mix"] = mix;
  j["intra_fraction"] = cfg.intra_fraction;
  j["long_range_fraction"] = cfg.long_range_fraction;
  j["relation_units"] = cfg.relation_units;
  j["event_units"] = cfg.event_units;
  j["filler_units"] = cfg.filler_units;
  return j.dump(2) + "\n";
}

}  // namespace cacer
