#ifndef CACER_SERIALIZE_H_
#define CACER_SERIALIZE_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cacer/bootstrap.h"
#include "cacer/context_window.h"
#include "cacer/scorer.h"
#include "cacer/synth.h"
#include "cacer/validate.h"

namespace cacer {

// "trigger", "argument", "relation" or "summary".
std::string_view RowGroup(std::string_view row_name);

// Score report as JSON; layout documented in docs/report_format.md.
std::string ScoreReportJson(const ScoreReport &report, const MatchOptions &opts);
// Aligned-column table: triggers and arguments with their overall row, then
// relations with theirs, then the grand total.
std::string ScoreReportTable(const ScoreReport &report);
// Inverse of ScoreReportJson() for the counts; throws Error("MALFORMED_REPORT").
ScoreReport ParseScoreReportJson(std::string_view json);

std::string SigTestJson(const SigTestResult &r);

// Per-note scores as "doc_id<TAB>value" lines; '#' lines and blanks skipped.
// Throws Error("MALFORMED_SCORES").
std::vector<NoteScore> ParseNoteScores(std::string_view tsv);
std::string FormatNoteScores(const std::vector<NoteScore> &scores);

// One JSON object per line for a note's violations.
std::string ViolationsJsonl(std::string_view doc_id, const std::vector<Violation> &violations);

std::string CoverageJson(const CoverageStats &stats, const WindowLimits &limits);

// GenConfig from a JSON object. Absent keys keep their defaults; unknown keys
// and ill-typed values throw Error("INVALID_CONFIG"). Lexicons are not part of
// the JSON form.
GenConfig GenConfigFromJson(std::string_view json, GenConfig base = {});
std::string GenConfigToJson(const GenConfig &cfg);

}  // namespace cacer

#endif  // CACER_SERIALIZE_H_
