#ifndef CACER_SCORER_H_
#define CACER_SCORER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cacer/schema.h"

namespace cacer {

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // 0/0 is taken as 0 for all three ratios.
  double precision() const;
  double recall() const;
  double f1() const;
  bool empty() const { return tp + fp + fn == 0; }

  Counts &operator+=(const Counts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts &) const = default;
};

// Scored categories: triggers per event type, each argument type, each
// relation type.
enum class Category : std::size_t {
  kDrugTrigger,
  kProblemTrigger,
  kAssertion,
  kChange,
  kSeverity,
  kAnatomy,
  kCharacteristics,
  kDuration,
  kFrequency,
  kAdminFor,
  kNotAdminBecause,
  kCauses,
  kImproves,
  kWorsens,
  kPip,
};
inline constexpr std::size_t kNumCategories = 15;

Category TriggerCategory(EventType t);
Category ArgumentCategory(ArgumentType t);
Category RelationCategory(RelationType t);
bool IsEventCategory(Category c);
// "Drug", "Problem", "Assertion", ..., "AdminFor", ..., "PIP".
std::string_view Name(Category c);

using CategoryCounts = std::array<Counts, kNumCategories>;
CategoryCounts &operator+=(CategoryCounts &a, const CategoryCounts &b);

enum class MatchStrategy {
  kGreedy,   // gold in document order; ties: largest overlap, earliest start
  kOptimal,  // maximum bipartite matching, for auditing the greedy result
};

struct MatchOptions {
  MatchStrategy strategy = MatchStrategy::kGreedy;
  bool exact_spans = false;  // strict mode: identical offsets instead of overlap
};

// Same event type and at least one shared character (identical offsets in
// exact mode).
bool TriggersEquivalent(const Event &a, const Event &b, bool exact_spans = false);

struct ArgumentRef {
  std::size_t event = 0;     // index into Document::events
  std::size_t argument = 0;  // index into Event::arguments

  bool operator==(const ArgumentRef &) const = default;
};

// One-to-one alignment between a gold and a predicted document.
struct Matching {
  using IndexPair = std::pair<std::size_t, std::size_t>;  // (gold, pred)

  std::vector<IndexPair> triggers;
  std::vector<std::size_t> unmatched_gold_triggers;
  std::vector<std::size_t> unmatched_pred_triggers;

  std::vector<std::pair<ArgumentRef, ArgumentRef>> arguments;
  std::vector<ArgumentRef> unmatched_gold_arguments;
  std::vector<ArgumentRef> unmatched_pred_arguments;

  std::vector<IndexPair> relations;
  std::vector<std::size_t> unmatched_gold_relations;
  std::vector<std::size_t> unmatched_pred_relations;
};

// Throws Error("TEXT_MISMATCH") if the two documents annotate different text.
Matching MatchDocuments(const Document &gold, const Document &pred, const MatchOptions &opts = {});

// Maximum trigger matching size, computed by augmenting paths.
std::size_t MaxTriggerMatching(const Document &gold, const Document &pred, bool exact_spans = false);

CategoryCounts CountMatching(const Document &gold, const Document &pred, const Matching &m);
CategoryCounts ScoreDocument(const Document &gold, const Document &pred,
                             const MatchOptions &opts = {});

struct ReportRow {
  std::string name;
  Counts counts;
};

// Rows per non-empty category in Category order, then "Events" (triggers and
// arguments), "Relations", and "Overall" (all categories). The three summary
// rows are always present; their counts are sums of category counts.
struct ScoreReport {
  CategoryCounts categories{};
  std::vector<ReportRow> rows;

  const ReportRow *Find(std::string_view name) const;
};

ScoreReport MakeReport(const CategoryCounts &counts);

// Documents are aligned by doc_id; throws Error("UNALIGNED_CORPORA") when the
// id sets differ. Per-note matching runs under OpenMP; counts are reduced in
// document order.
ScoreReport Score(std::span<const Document> gold, std::span<const Document> pred,
                  const MatchOptions &opts = {});
// Serial reference for Score().
ScoreReport ScoreSerial(std::span<const Document> gold, std::span<const Document> pred,
                        const MatchOptions &opts = {});

// Inter-annotator agreement: annotator A plays gold, B plays prediction.
ScoreReport Iaa(std::span<const Document> ann_a, std::span<const Document> ann_b,
                const MatchOptions &opts = {});

struct NoteScore {
  std::string doc_id;
  double value = 0.0;

  bool operator==(const NoteScore &) const = default;
};

// F1 of one report row ("Overall", "Events", "Relations" or a category name)
// per aligned note, in gold order.
std::vector<NoteScore> PerNoteF1(std::span<const Document> gold, std::span<const Document> pred,
                                 std::string_view row = "Overall", const MatchOptions &opts = {});

}  // namespace cacer

#endif  // CACER_SCORER_H_
