#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "builders.h"
#include "cacer/error.h"
#include "cacer/scorer.h"
#include "cacer/standoff.h"
#include "cacer/synth.h"
#include "oracles.h"

namespace cacer {
namespace {

using namespace cacer::testing;
namespace fs = std::filesystem;

const fs::path kFixtures = CACER_FIXTURES;

std::vector<Document> ReadCorpus(const fs::path &dir) {
  std::vector<Document> out;
  for (const std::string &name : ListCorpus(dir)) out.push_back(ReadDocument(dir, name));
  return out;
}

Document At(std::string text, std::initializer_list<std::tuple<EventType, std::size_t, std::size_t>> evs) {
  Document d = Doc(std::move(text));
  int i = 0;
  for (auto [type, s, e] : evs) {
    Event ev;
    ev.id = "E" + std::to_string(++i);
    ev.type = type;
    ev.trigger = MakeSpan(d.text, s, e);
    d.events.push_back(ev);
  }
  return d;
}

TEST(Counts, Formulas) {
  Counts zero;
  EXPECT_EQ(zero.precision(), 0.0);
  EXPECT_EQ(zero.recall(), 0.0);
  EXPECT_EQ(zero.f1(), 0.0);
  Counts c{3, 1, 2};
  EXPECT_DOUBLE_EQ(c.precision(), 0.75);
  EXPECT_DOUBLE_EQ(c.recall(), 0.6);
  EXPECT_DOUBLE_EQ(c.f1(), 2 * 0.75 * 0.6 / (0.75 + 0.6));
  Counts only_fp{0, 4, 0};
  EXPECT_EQ(only_fp.f1(), 0.0);
}

TEST(TriggersEquivalent, Examples) {
  Document d = At("The back pain is worse today.", {{EventType::kProblem, 4, 13},
                                                    {EventType::kProblem, 9, 13},
                                                    {EventType::kDrug, 9, 13},
                                                    {EventType::kProblem, 14, 16}});
  const auto &e = d.events;
  EXPECT_TRUE(TriggersEquivalent(e[0], e[0]));
  EXPECT_TRUE(TriggersEquivalent(e[1], e[0]));
  EXPECT_FALSE(TriggersEquivalent(e[1], e[2]));
  EXPECT_FALSE(TriggersEquivalent(e[0], e[3]));
  EXPECT_FALSE(TriggersEquivalent(e[1], e[0], true));
  EXPECT_TRUE(TriggersEquivalent(e[1], e[1], true));
}

TEST(Matching, IdenticalDocuments) {
  Document d = Doc("Lupron for pain in back.");
  Drug(d, "E1", "Lupron");
  Event &p = Problem(d, "E2", "pain");
  AddSpanArg(d, p, ArgumentType::kAnatomy, "back");
  Relate(d, RelationType::kAdminFor, "E1", "E2");
  Matching m = MatchDocuments(d, d);
  EXPECT_EQ(m.triggers.size(), 2u);
  EXPECT_EQ(m.arguments.size(), 2u);
  EXPECT_EQ(m.relations.size(), 1u);
  EXPECT_TRUE(m.unmatched_gold_triggers.empty());
  EXPECT_TRUE(m.unmatched_pred_triggers.empty());
  EXPECT_TRUE(m.unmatched_gold_arguments.empty());
  EXPECT_TRUE(m.unmatched_pred_arguments.empty());
  EXPECT_TRUE(m.unmatched_gold_relations.empty());
  EXPECT_TRUE(m.unmatched_pred_relations.empty());
}

TEST(Matching, OneOfTwoProblems) {
  Document gold = Doc("Cough and fever.");
  Problem(gold, "E1", "Cough");
  Problem(gold, "E2", "fever");
  Document pred = gold;
  pred.events.pop_back();
  Matching m = MatchDocuments(gold, pred);
  EXPECT_EQ(m.triggers.size(), 1u);
  EXPECT_EQ(m.unmatched_gold_triggers, std::vector<std::size_t>{1});
}

TEST(Matching, CompetingPredictions) {
  Document gold = At("Severe back pain today.", {{EventType::kProblem, 7, 16}});
  Document pred = At("Severe back pain today.",
                     {{EventType::kProblem, 12, 16}, {EventType::kProblem, 7, 16}});
  Matching m = MatchDocuments(gold, pred);
  ASSERT_EQ(m.triggers.size(), 1u);
  EXPECT_EQ(m.triggers[0].second, 1u);  // largest overlap wins
  EXPECT_EQ(m.unmatched_pred_triggers, std::vector<std::size_t>{0});
  EXPECT_EQ(MaxTriggerMatching(gold, pred), oracle::ExhaustiveTriggerMatching(gold, pred, false));
}

TEST(Matching, OptimalBeatsGreedyOnCraftedCase) {
  // Greedy gives G1 its largest overlap P1 and strands G2; the maximum
  // matching pairs G1-P2 and G2-P1.
  const std::string text = "abcdefghijklmnop";
  Document gold = At(text, {{EventType::kProblem, 0, 10}, {EventType::kProblem, 5, 9}});
  Document pred = At(text, {{EventType::kProblem, 0, 9}, {EventType::kProblem, 9, 12}});
  EXPECT_EQ(MatchDocuments(gold, pred).triggers.size(), 1u);
  MatchOptions opt{MatchStrategy::kOptimal, false};
  EXPECT_EQ(MatchDocuments(gold, pred, opt).triggers.size(), 2u);
  EXPECT_EQ(oracle::ExhaustiveTriggerMatching(gold, pred, false), 2u);
  EXPECT_EQ(MaxTriggerMatching(gold, pred), 2u);
}

TEST(Matching, LabeledArgumentsNeedEqualLabels) {
  Document gold = Doc("No cough.");
  Problem(gold, "E1", "cough").arguments[0].label = Subtype::kAbsent;
  Document pred = gold;
  pred.events[0].arguments[0].label = Subtype::kPossible;
  CategoryCounts c = ScoreDocument(gold, pred);
  const Counts &a = c[static_cast<std::size_t>(ArgumentCategory(ArgumentType::kAssertion))];
  EXPECT_EQ(a, (Counts{0, 1, 1}));
  EXPECT_EQ(c[static_cast<std::size_t>(TriggerCategory(EventType::kProblem))], (Counts{1, 0, 0}));
}

TEST(Matching, TextMismatchThrows) {
  try {
    MatchDocuments(Doc("one"), Doc("two"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "TEXT_MISMATCH");
  }
}

TEST(Score, GoldAgainstItself) {
  GenConfig cfg;
  cfg.seed = 3;
  cfg.n_notes = 50;
  const auto docs = GenerateCorpus(cfg);
  ScoreReport r = Score(docs, docs);
  ASSERT_FALSE(r.rows.empty());
  for (const ReportRow &row : r.rows) {
    EXPECT_EQ(row.counts.f1(), 1.0) << row.name;
    EXPECT_EQ(row.counts.fp + row.counts.fn, 0u) << row.name;
  }
  EXPECT_NE(r.Find("Overall"), nullptr);
}

TEST(Score, TwoRelationsOneCorrect) {
  const auto gold = ReadCorpus(kFixtures / "two_relations" / "gold");
  const auto pred = ReadCorpus(kFixtures / "two_relations" / "pred");
  ScoreReport r = Score(gold, pred);
  const Counts &rel = r.Find("Relations")->counts;
  EXPECT_DOUBLE_EQ(rel.precision(), 1.0);
  EXPECT_DOUBLE_EQ(rel.recall(), 0.5);
  EXPECT_NEAR(rel.f1(), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r.Find("Events")->counts.f1(), 1.0);
}

TEST(Score, HandTalliedFixture) {
  const auto gold = ReadCorpus(kFixtures / "tally" / "gold");
  const auto pred = ReadCorpus(kFixtures / "tally" / "pred");
  ScoreReport r = Score(gold, pred);

  std::ifstream in(kFixtures / "tally" / "TALLY.tsv");
  std::map<std::string, Counts> expected;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name;
    Counts c;
    fields >> name >> c.tp >> c.fp >> c.fn;
    expected[name] = c;
  }
  ASSERT_EQ(expected.size(), 12u);
  for (const auto &[name, c] : expected) {
    const ReportRow *row = r.Find(name);
    ASSERT_NE(row, nullptr) << name;
    EXPECT_EQ(row->counts, c) << name;
  }
  // Rows for empty categories are omitted.
  EXPECT_EQ(r.rows.size(), expected.size());
  EXPECT_EQ(r.Find("Duration"), nullptr);
}

TEST(Score, ExactSpansAreStricter) {
  const auto gold = ReadCorpus(kFixtures / "tally" / "gold");
  const auto pred = ReadCorpus(kFixtures / "tally" / "pred");
  ScoreReport r = Score(gold, pred, {MatchStrategy::kGreedy, true});
  EXPECT_EQ(r.Find("Problem")->counts, (Counts{4, 1, 2}));
}

TEST(Score, UnalignedCorpora) {
  GenConfig cfg;
  cfg.n_notes = 3;
  auto docs = GenerateCorpus(cfg);
  std::vector<Document> fewer(docs.begin(), docs.begin() + 2);
  for (auto *f : {&Score, &ScoreSerial}) {
    try {
      f(docs, fewer, {});
      FAIL();
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), "UNALIGNED_CORPORA");
    }
  }
  // Order does not matter, ids do.
  std::vector<Document> reordered(docs.rbegin(), docs.rend());
  EXPECT_EQ(Score(docs, reordered).Find("Overall")->counts.f1(), 1.0);
}

TEST(Iaa, SymmetricAndDisjoint) {
  const auto a = ReadCorpus(kFixtures / "tally" / "gold");
  const auto b = ReadCorpus(kFixtures / "tally" / "pred");
  ScoreReport ab = Iaa(a, b), ba = Iaa(b, a);
  const Counts &x = ab.Find("Overall")->counts, &y = ba.Find("Overall")->counts;
  EXPECT_DOUBLE_EQ(x.f1(), y.f1());
  EXPECT_DOUBLE_EQ(x.precision(), y.recall());
  EXPECT_DOUBLE_EQ(x.recall(), y.precision());
  EXPECT_EQ(Iaa(a, a).Find("Overall")->counts.f1(), 1.0);

  Document one = Doc("Cough and fever.", "n");
  Document other = one;
  Problem(one, "E1", "Cough");
  Problem(other, "E1", "fever");
  std::vector<Document> da{one}, db{other};
  EXPECT_EQ(Iaa(da, db).Find("Overall")->counts.f1(), 0.0);
}

TEST(Perturb, ZeroNoiseIsIdentity) {
  GenConfig cfg;
  cfg.seed = 4;
  cfg.n_notes = 5;
  for (const Document &d : GenerateCorpus(cfg)) {
    Document p = Perturb(d, {}, 1);
    EXPECT_TRUE(oracle::SameAnnotations(d, p));
    EXPECT_EQ(p.source, "predicted");
  }
}

TEST(Perturb, DropTriggersGivesExactRecall) {
  GenConfig cfg;
  cfg.seed = 8;
  cfg.n_notes = 20;
  for (const Document &d : GenerateCorpus(cfg)) {
    const std::size_t n = d.events.size();
    for (std::size_t k = 0; k <= std::min<std::size_t>(n, 3); ++k) {
      NoiseSpec noise;
      noise.drop_triggers = k;
      Document p = Perturb(d, noise, 100 + k);
      CategoryCounts c = ScoreDocument(d, p);
      Counts triggers = c[static_cast<std::size_t>(Category::kDrugTrigger)];
      triggers += c[static_cast<std::size_t>(Category::kProblemTrigger)];
      EXPECT_EQ(triggers.tp, n - k);
      EXPECT_EQ(triggers.fn, k);
      EXPECT_EQ(triggers.fp, 0u);
    }
  }
}

TEST(Perturb, FlipOneAssertion) {
  GenConfig cfg;
  cfg.seed = 12;
  cfg.n_notes = 10;
  for (const Document &d : GenerateCorpus(cfg)) {
    if (std::none_of(d.events.begin(), d.events.end(),
                     [](const Event &e) { return e.type == EventType::kProblem; })) {
      continue;
    }
    NoiseSpec noise;
    noise.flip_labels = 1;
    Document p = Perturb(d, noise, 5);
    CategoryCounts base = ScoreDocument(d, d), flipped = ScoreDocument(d, p);
    const auto assertion = static_cast<std::size_t>(ArgumentCategory(ArgumentType::kAssertion));
    for (Category t : {Category::kDrugTrigger, Category::kProblemTrigger}) {
      EXPECT_EQ(flipped[static_cast<std::size_t>(t)], base[static_cast<std::size_t>(t)]);
    }
    EXPECT_EQ(flipped[assertion].tp + 1, base[assertion].tp);
    EXPECT_EQ(flipped[assertion].fp, 1u);
    EXPECT_EQ(flipped[assertion].fn, 1u);
  }
}

TEST(Perturb, InsertionsAreFalsePositives) {
  GenConfig cfg;
  cfg.seed = 13;
  cfg.n_notes = 10;
  for (const Document &d : GenerateCorpus(cfg)) {
    NoiseSpec noise;
    noise.insert_triggers = 2;
    noise.insert_relations = 1;
    noise.drop_relations = 1;
    Document p = Perturb(d, noise, 6);
    ScoreReport r = Score(std::vector<Document>{d}, std::vector<Document>{p});
    EXPECT_EQ(r.Find("Events")->counts.fn, 0u);
    EXPECT_EQ(r.Find("Drug")->counts.fp, p.events.size() - d.events.size());
    const Counts &rel = r.Find("Relations")->counts;
    EXPECT_EQ(rel.tp + rel.fn, d.relations.size());
    EXPECT_EQ(rel.tp + rel.fp, p.relations.size());
  }
}

TEST(PerNote, F1PerDocument) {
  const auto gold = ReadCorpus(kFixtures / "tally" / "gold");
  const auto pred = ReadCorpus(kFixtures / "tally" / "pred");
  auto scores = PerNoteF1(gold, pred);
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(scores[0].doc_id, "n1");
  // n3: 3 event items matched, AdminFor missed, Causes spurious.
  EXPECT_NEAR(scores[2].value, (Counts{3, 1, 1}.f1()), 1e-15);
  auto rel = PerNoteF1(gold, pred, "Relations");
  EXPECT_EQ(rel[2].value, 0.0);
}

}  // namespace
}  // namespace cacer
