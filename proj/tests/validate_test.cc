#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "builders.h"
#include "cacer/error.h"
#include "cacer/validate.h"

namespace cacer {
namespace {

using namespace cacer::testing;

bool HasCode(const std::vector<Violation> &vs, std::string_view code) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation &v) { return v.code == code; });
}

TEST(Validate, EmptyDocumentIsValid) {
  EXPECT_TRUE(ValidateDocument(Doc("")).empty());
  EXPECT_TRUE(ValidateDocument(Doc("No findings today.")).empty());
}

TEST(Validate, DrugWithArgument) {
  Document d = Doc("Lupron injection to the hip.");
  Event &e = Drug(d, "E1", "Lupron");
  AddSpanArg(d, e, ArgumentType::kAnatomy, "hip");
  auto vs = ValidateDocument(d);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, "DRUG_HAS_ARGUMENT");
  EXPECT_EQ(vs[0].element, "E1");
  EXPECT_EQ(vs[0].severity, Severity::kError);
}

TEST(Validate, TwoAssertions) {
  Document d = Doc("No pain today.");
  Event &e = Problem(d, "E1", "pain");
  Argument second;
  second.type = ArgumentType::kAssertion;
  second.label = Subtype::kAbsent;
  e.arguments.push_back(second);
  auto vs = ValidateDocument(d);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, "CARDINALITY");
  EXPECT_EQ(vs[0].detail, "CARDINALITY(Assertion, max=1, found=2)");
  EXPECT_TRUE(HasErrors(vs));
}

TEST(Validate, MissingAssertion) {
  Document d = Doc("Pain today.");
  Problem(d, "E1", "Pain").arguments.clear();
  auto vs = ValidateDocument(d);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].detail, "CARDINALITY(Assertion, min=1, found=0)");
}

TEST(Validate, SecondAnatomyIsOnlyAWarning) {
  Document d = Doc("Pain in back and neck.");
  Event &e = Problem(d, "E1", "Pain");
  AddSpanArg(d, e, ArgumentType::kAnatomy, "back");
  AddSpanArg(d, e, ArgumentType::kAnatomy, "neck");
  auto vs = ValidateDocument(d);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].severity, Severity::kWarning);
  EXPECT_FALSE(HasErrors(vs));
}

TEST(Validate, CharacteristicsAreUnbounded) {
  Document d = Doc("Pain sharp and constant.");
  Event &e = Problem(d, "E1", "Pain");
  AddSpanArg(d, e, ArgumentType::kCharacteristics, "sharp");
  AddSpanArg(d, e, ArgumentType::kCharacteristics, "constant");
  EXPECT_TRUE(ValidateDocument(d).empty());
}

TEST(Validate, LabelFromWrongVocabulary) {
  Document d = Doc("Pain today.");
  Problem(d, "E1", "Pain").arguments[0].label = Subtype::kMild;
  EXPECT_TRUE(HasCode(ValidateDocument(d), "LABEL_NOT_IN_VOCABULARY"));
}

TEST(Validate, RelationTyping) {
  Document d = Doc("Lupron for pain.");
  Drug(d, "E1", "Lupron");
  Problem(d, "E2", "pain");
  Relate(d, RelationType::kPip, "E1", "E2");
  Relate(d, RelationType::kAdminFor, "E2", "E1");
  Relate(d, RelationType::kAdminFor, "E1", "E9");
  auto vs = ValidateDocument(d);
  EXPECT_EQ(std::count_if(vs.begin(), vs.end(),
                          [](const Violation &v) { return v.code == "RELATION_TYPING"; }),
            2);
  EXPECT_TRUE(HasCode(vs, "DANGLING_RELATION"));
}

TEST(Validate, SpanBounds) {
  Document d = Doc("Pain.");
  Event &e = Problem(d, "E1", "Pain");
  e.trigger.end = 40;
  EXPECT_TRUE(HasCode(ValidateDocument(d), "SPAN_OUT_OF_BOUNDS"));
}

TEST(Validate, CrossSentenceArgumentWarns) {
  Document d = Doc("Pain today. Back is stiff.");
  Event &e = Problem(d, "E1", "Pain");
  AddSpanArg(d, e, ArgumentType::kAnatomy, "Back");
  auto vs = ValidateDocument(d);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, "CROSS_SENTENCE_ARGUMENT");
  EXPECT_EQ(vs[0].severity, Severity::kWarning);
}

TEST(Validate, OrderIndependent) {
  Document d = Doc("No pain in back. Lupron given. Cough and fever noted.");
  Event &p = Problem(d, "E1", "pain");
  AddSpanArg(d, p, ArgumentType::kAnatomy, "back");
  AddSpanArg(d, p, ArgumentType::kAnatomy, "in");
  Event &l = Drug(d, "E2", "Lupron");
  AddSpanArg(d, l, ArgumentType::kDuration, "given");
  Problem(d, "E3", "Cough").arguments.clear();
  Problem(d, "E4", "fever");
  Relate(d, RelationType::kPip, "E3", "E4");
  Relate(d, RelationType::kAdminFor, "E4", "E2");
  const auto expected = ValidateDocument(d);
  ASSERT_GE(expected.size(), 4u);

  std::mt19937 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    Document shuffled = d;
    std::shuffle(shuffled.events.begin(), shuffled.events.end(), gen);
    for (Event &e : shuffled.events) std::shuffle(e.arguments.begin(), e.arguments.end(), gen);
    std::shuffle(shuffled.relations.begin(), shuffled.relations.end(), gen);
    EXPECT_EQ(ValidateDocument(shuffled), expected);
  }
}

TEST(SentenceIndex, InsideFirstSentence) {
  Document d = Doc("Aa bb. Cc dd. Ee ff. Gg hh.");
  auto r = SentenceIndex(d, Find(d, "bb"));
  EXPECT_EQ(r.ordinal, 0u);
  EXPECT_FALSE(r.straddles);
}

TEST(SentenceIndex, FirstCharacterOfSentence) {
  Document d = Doc("Aa bb. Cc dd. Ee ff. Gg hh.");
  ASSERT_EQ(d.sentences.size(), 4u);
  auto r = SentenceIndex(d, MakeSpan(d.text, d.sentences[3].start, d.sentences[3].start + 2));
  EXPECT_EQ(r.ordinal, 3u);
  EXPECT_FALSE(r.straddles);
}

TEST(SentenceIndex, Straddling) {
  Document d = Doc("Aa bb. Cc dd. Ee ff. Gg hh.");
  auto r = SentenceIndex(d, Find(d, "dd. Ee"));
  EXPECT_EQ(r.ordinal, 1u);
  EXPECT_TRUE(r.straddles);
}

TEST(SentenceIndex, OutOfBounds) {
  Document d = Doc("Aa bb.");
  try {
    SentenceIndex(d, Span{2, 99, ""});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "OUT_OF_BOUNDS");
  }
}

}  // namespace
}  // namespace cacer
