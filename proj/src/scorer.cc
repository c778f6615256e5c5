#include "cacer/scorer.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>

#include "cacer/error.h"

namespace cacer {
namespace {

bool SpansEquivalent(const Span &a, const Span &b, bool exact) {
  return exact ? (a.start == b.start && a.end == b.end) : Overlaps(a, b);
}

// Indices of `events` in document order.
std::vector<std::size_t> DocumentOrder(const std::vector<Event> &events) {
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(events[a].trigger.start, events[a].trigger.end) <
           std::tie(events[b].trigger.start, events[b].trigger.end);
  });
  return order;
}

// Greedy one-to-one assignment. `gold_order` lists gold items in processing
// order; `compatible(g, p)` is the equivalence rule; `score(g, p)` orders
// candidates (larger first), ties broken by the smaller `position(p)`.
template <typename Compatible, typename Rank>
std::vector<std::pair<std::size_t, std::size_t>> GreedyAssign(
    const std::vector<std::size_t> &gold_order, std::size_t n_pred, Compatible compatible,
    Rank rank) {
  std::vector<bool> used(n_pred, false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t g : gold_order) {
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < n_pred; ++p) {
      if (used[p] || !compatible(g, p)) continue;
      if (!best || rank(g, p) > rank(g, *best)) best = p;
    }
    if (best) {
      used[*best] = true;
      pairs.emplace_back(g, *best);
    }
  }
  return pairs;
}

// Maximum bipartite matching by repeated augmenting paths.
template <typename Compatible>
std::vector<std::pair<std::size_t, std::size_t>> OptimalAssign(
    const std::vector<std::size_t> &gold_order, std::size_t n_pred, Compatible compatible) {
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n_pred, kFree);  // pred -> gold
  std::vector<bool> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t g) {
    for (std::size_t p = 0; p < n_pred; ++p) {
      if (visited[p] || !compatible(g, p)) continue;
      visited[p] = true;
      if (owner[p] == kFree || augment(owner[p])) {
        owner[p] = g;
        return true;
      }
    }
    return false;
  };
  for (std::size_t g : gold_order) {
    visited.assign(n_pred, false);
    augment(g);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t g : gold_order) {
    for (std::size_t p = 0; p < n_pred; ++p) {
      if (owner[p] == g) pairs.emplace_back(g, p);
    }
  }
  return pairs;
}

template <typename Compatible, typename Rank>
std::vector<std::pair<std::size_t, std::size_t>> Assign(MatchStrategy strategy,
                                                        const std::vector<std::size_t> &gold_order,
                                                        std::size_t n_pred, Compatible compatible,
                                                        Rank rank) {
  if (strategy == MatchStrategy::kOptimal) return OptimalAssign(gold_order, n_pred, compatible);
  return GreedyAssign(gold_order, n_pred, compatible, rank);
}

template <typename T>
std::vector<std::size_t> Unmatched(std::size_t n, const std::vector<std::pair<T, T>> &pairs,
                                   bool gold_side) {
  std::vector<bool> hit(n, false);
  for (const auto &[g, p] : pairs) hit[gold_side ? g : p] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!hit[i]) out.push_back(i);
  }
  return out;
}

void MatchArguments(const Event &gold, std::size_t gi, const Event &pred, std::size_t pi,
                    const MatchOptions &opts, Matching &m) {
  const auto &ga = gold.arguments;
  const auto &pa = pred.arguments;
  std::vector<std::size_t> gold_order(ga.size());
  std::iota(gold_order.begin(), gold_order.end(), 0);
  std::stable_sort(gold_order.begin(), gold_order.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t sa = ga[a].span ? ga[a].span->start : 0;
    const std::size_t sb = ga[b].span ? ga[b].span->start : 0;
    return sa < sb;
  });
  auto compatible = [&](std::size_t g, std::size_t p) {
    if (ga[g].type != pa[p].type) return false;
    if (IsLabeled(ga[g].type)) return ga[g].label.has_value() && ga[g].label == pa[p].label;
    return ga[g].span && pa[p].span && SpansEquivalent(*ga[g].span, *pa[p].span, opts.exact_spans);
  };
  auto rank = [&](std::size_t g, std::size_t p) {
    const std::size_t overlap =
        ga[g].span && pa[p].span ? OverlapLength(*ga[g].span, *pa[p].span) : 0;
    const std::size_t start = pa[p].span ? pa[p].span->start : 0;
    return std::make_tuple(overlap, static_cast<std::ptrdiff_t>(-static_cast<std::ptrdiff_t>(start)),
                           -static_cast<std::ptrdiff_t>(p));
  };
  const auto pairs = Assign(opts.strategy, gold_order, pa.size(), compatible, rank);
  for (const auto &[g, p] : pairs) m.arguments.push_back({{gi, g}, {pi, p}});
  for (std::size_t g : Unmatched(ga.size(), pairs, true)) m.unmatched_gold_arguments.push_back({gi, g});
  for (std::size_t p : Unmatched(pa.size(), pairs, false)) m.unmatched_pred_arguments.push_back({pi, p});
}

ScoreReport ScoreImpl(std::span<const Document> gold, std::span<const Document> pred,
                      const MatchOptions &opts, bool parallel) {
  std::map<std::string, std::size_t> pred_index;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred_index.emplace(pred[i].doc_id, i).second) {
      throw Error("UNALIGNED_CORPORA", "duplicate predicted doc_id " + pred[i].doc_id);
    }
  }
  std::vector<std::size_t> partner(gold.size());
  std::map<std::string, int> gold_seen;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (++gold_seen[gold[i].doc_id] > 1) {
      throw Error("UNALIGNED_CORPORA", "duplicate gold doc_id " + gold[i].doc_id);
    }
    auto it = pred_index.find(gold[i].doc_id);
    if (it == pred_index.end()) {
      throw Error("UNALIGNED_CORPORA", "no prediction for " + gold[i].doc_id);
    }
    partner[i] = it->second;
  }
  if (pred.size() != gold.size()) {
    throw Error("UNALIGNED_CORPORA", "prediction has documents missing from gold");
  }

  std::vector<CategoryCounts> per_doc(gold.size());
  const auto n = static_cast<std::ptrdiff_t>(gold.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      per_doc[i] = ScoreDocument(gold[i], pred[partner[i]], opts);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      per_doc[i] = ScoreDocument(gold[i], pred[partner[i]], opts);
    }
  }
  CategoryCounts total{};
  for (const CategoryCounts &c : per_doc) total += c;
  return MakeReport(total);
}

}  // namespace

double Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Counts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Category TriggerCategory(EventType t) {
  return t == EventType::kDrug ? Category::kDrugTrigger : Category::kProblemTrigger;
}

Category ArgumentCategory(ArgumentType t) {
  switch (t) {
    case ArgumentType::kAssertion:
      return Category::kAssertion;
    case ArgumentType::kChange:
      return Category::kChange;
    case ArgumentType::kSeverity:
      return Category::kSeverity;
    case ArgumentType::kAnatomy:
      return Category::kAnatomy;
    case ArgumentType::kCharacteristics:
      return Category::kCharacteristics;
    case ArgumentType::kDuration:
      return Category::kDuration;
    case ArgumentType::kFrequency:
      return Category::kFrequency;
  }
  return Category::kAssertion;
}

Category RelationCategory(RelationType t) {
  return static_cast<Category>(static_cast<std::size_t>(Category::kAdminFor) +
                               static_cast<std::size_t>(t));
}

bool IsEventCategory(Category c) { return c < Category::kAdminFor; }

std::string_view Name(Category c) {
  static constexpr std::array<std::string_view, kNumCategories> kNames = {
      "Drug",     "Problem",  "Assertion",       "Change", "Severity",
      "Anatomy",  "Characteristics", "Duration", "Frequency", "AdminFor",
      "NotAdminBecause", "Causes", "Improves", "Worsens",  "PIP"};
  return kNames[static_cast<std::size_t>(c)];
}

CategoryCounts &operator+=(CategoryCounts &a, const CategoryCounts &b) {
  for (std::size_t i = 0; i < kNumCategories; ++i) a[i] += b[i];
  return a;
}

bool TriggersEquivalent(const Event &a, const Event &b, bool exact_spans) {
  return a.type == b.type && SpansEquivalent(a.trigger, b.trigger, exact_spans);
}

Matching MatchDocuments(const Document &gold, const Document &pred, const MatchOptions &opts) {
  if (!(gold.text == pred.text)) {
    throw Error("TEXT_MISMATCH", "gold and predicted notes differ for " + gold.doc_id);
  }
  Matching m;
  const auto &ge = gold.events;
  const auto &pe = pred.events;
  auto compatible = [&](std::size_t g, std::size_t p) {
    return TriggersEquivalent(ge[g], pe[p], opts.exact_spans);
  };
  auto rank = [&](std::size_t g, std::size_t p) {
    return std::make_tuple(OverlapLength(ge[g].trigger, pe[p].trigger),
                           -static_cast<std::ptrdiff_t>(pe[p].trigger.start),
                           -static_cast<std::ptrdiff_t>(p));
  };
  m.triggers = Assign(opts.strategy, DocumentOrder(ge), pe.size(), compatible, rank);
  m.unmatched_gold_triggers = Unmatched(ge.size(), m.triggers, true);
  m.unmatched_pred_triggers = Unmatched(pe.size(), m.triggers, false);

  for (const auto &[g, p] : m.triggers) MatchArguments(ge[g], g, pe[p], p, opts, m);
  for (std::size_t g : m.unmatched_gold_triggers) {
    for (std::size_t a = 0; a < ge[g].arguments.size(); ++a) m.unmatched_gold_arguments.push_back({g, a});
  }
  for (std::size_t p : m.unmatched_pred_triggers) {
    for (std::size_t a = 0; a < pe[p].arguments.size(); ++a) m.unmatched_pred_arguments.push_back({p, a});
  }

  // Relations are equivalent when both endpoints are matched to each other
  // and the types agree.
  std::map<std::string, std::string> gold_to_pred_id;
  for (const auto &[g, p] : m.triggers) gold_to_pred_id.emplace(ge[g].id, pe[p].id);
  const auto &gr = gold.relations;
  const auto &pr = pred.relations;
  auto rel_compatible = [&](std::size_t g, std::size_t p) {
    if (gr[g].type != pr[p].type) return false;
    auto h = gold_to_pred_id.find(gr[g].head);
    auto t = gold_to_pred_id.find(gr[g].tail);
    return h != gold_to_pred_id.end() && t != gold_to_pred_id.end() && h->second == pr[p].head &&
           t->second == pr[p].tail;
  };
  auto rel_rank = [](std::size_t, std::size_t p) { return -static_cast<std::ptrdiff_t>(p); };
  std::vector<std::size_t> rel_order(gr.size());
  std::iota(rel_order.begin(), rel_order.end(), 0);
  m.relations = GreedyAssign(rel_order, pr.size(), rel_compatible, rel_rank);
  m.unmatched_gold_relations = Unmatched(gr.size(), m.relations, true);
  m.unmatched_pred_relations = Unmatched(pr.size(), m.relations, false);
  return m;
}

std::size_t MaxTriggerMatching(const Document &gold, const Document &pred, bool exact_spans) {
  MatchOptions opts;
  opts.strategy = MatchStrategy::kOptimal;
  opts.exact_spans = exact_spans;
  return MatchDocuments(gold, pred, opts).triggers.size();
}

CategoryCounts CountMatching(const Document &gold, const Document &pred, const Matching &m) {
  CategoryCounts c{};
  auto at = [&](Category cat) -> Counts & { return c[static_cast<std::size_t>(cat)]; };
  for (const auto &[g, p] : m.triggers) ++at(TriggerCategory(gold.events[g].type)).tp;
  for (std::size_t g : m.unmatched_gold_triggers) ++at(TriggerCategory(gold.events[g].type)).fn;
  for (std::size_t p : m.unmatched_pred_triggers) ++at(TriggerCategory(pred.events[p].type)).fp;

  auto arg_type = [](const Document &d, const ArgumentRef &r) {
    return d.events[r.event].arguments[r.argument].type;
  };
  for (const auto &[g, p] : m.arguments) ++at(ArgumentCategory(arg_type(gold, g))).tp;
  for (const ArgumentRef &g : m.unmatched_gold_arguments) ++at(ArgumentCategory(arg_type(gold, g))).fn;
  for (const ArgumentRef &p : m.unmatched_pred_arguments) ++at(ArgumentCategory(arg_type(pred, p))).fp;

  for (const auto &[g, p] : m.relations) ++at(RelationCategory(gold.relations[g].type)).tp;
  for (std::size_t g : m.unmatched_gold_relations) ++at(RelationCategory(gold.relations[g].type)).fn;
  for (std::size_t p : m.unmatched_pred_relations) ++at(RelationCategory(pred.relations[p].type)).fp;
  return c;
}

CategoryCounts ScoreDocument(const Document &gold, const Document &pred, const MatchOptions &opts) {
  return CountMatching(gold, pred, MatchDocuments(gold, pred, opts));
}

const ReportRow *ScoreReport::Find(std::string_view name) const {
  for (const ReportRow &r : rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

ScoreReport MakeReport(const CategoryCounts &counts) {
  ScoreReport report;
  report.categories = counts;
  Counts events;
  Counts relations;
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    const auto cat = static_cast<Category>(i);
    (IsEventCategory(cat) ? events : relations) += counts[i];
    if (!counts[i].empty()) report.rows.push_back({std::string(Name(cat)), counts[i]});
  }
  Counts overall = events;
  overall += relations;
  report.rows.push_back({"Events", events});
  report.rows.push_back({"Relations", relations});
  report.rows.push_back({"Overall", overall});
  return report;
}

ScoreReport Score(std::span<const Document> gold, std::span<const Document> pred,
                  const MatchOptions &opts) {
  return ScoreImpl(gold, pred, opts, true);
}

ScoreReport ScoreSerial(std::span<const Document> gold, std::span<const Document> pred,
                        const MatchOptions &opts) {
  return ScoreImpl(gold, pred, opts, false);
}

ScoreReport Iaa(std::span<const Document> ann_a, std::span<const Document> ann_b,
                const MatchOptions &opts) {
  return Score(ann_a, ann_b, opts);
}

std::vector<NoteScore> PerNoteF1(std::span<const Document> gold, std::span<const Document> pred,
                                 std::string_view row, const MatchOptions &opts) {
  std::map<std::string, const Document *> by_id;
  for (const Document &d : pred) {
    if (!by_id.emplace(d.doc_id, &d).second) {
      throw Error("UNALIGNED_CORPORA", "duplicate predicted doc_id " + d.doc_id);
    }
  }
  if (by_id.size() != gold.size()) throw Error("UNALIGNED_CORPORA", "corpus sizes differ");
  std::vector<NoteScore> out;
  out.reserve(gold.size());
  for (const Document &g : gold) {
    auto it = by_id.find(g.doc_id);
    if (it == by_id.end()) throw Error("UNALIGNED_CORPORA", "no prediction for " + g.doc_id);
    const ScoreReport r = MakeReport(ScoreDocument(g, *it->second, opts));
    const ReportRow *found = r.Find(row);
    out.push_back({g.doc_id, found ? found->counts.f1() : 0.0});
  }
  return out;
}

}  // namespace cacer
