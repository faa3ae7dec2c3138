#include <gtest/gtest.h>

#include "refdet/evaluate.hpp"

namespace refdet::eval {
namespace {

using K = RefactoringKind;

// Three correct singletons, one wrong singleton, and one unrecognized label
// riding along on a correct case: 3 of 4 cases found, 3 of 5 labels right.
std::vector<CaseResult> four_case_fixture() {
  return {
      {"c1", K::RenameClass, {K::RenameClass}, {"Pull Down Member"}, 12},
      {"c2", K::MoveMethod, {K::MoveMethod}, {}, 25},
      {"c3", K::PullUpField, {K::PullUpField}, {}, 44},
      {"c4", K::PushDownMethod, {K::PullUpMethod}, {}, 130},
  };
}

TEST(Score, FourCaseFixture) {
  const auto r = score(four_case_fixture());
  EXPECT_EQ(r.cases, 4);
  EXPECT_EQ(r.correct_cases, 3);
  EXPECT_EQ(r.recall, 0.75);
  EXPECT_EQ(r.precision, 0.6);
  EXPECT_EQ(r.precision_strict, 0.6);
  EXPECT_EQ(r.precision_lenient, 0.75);
  EXPECT_EQ(r.labels_recognized, 4);
  EXPECT_EQ(r.labels_unrecognized, 1);
  EXPECT_EQ(r.per_kind.at(K::PushDownMethod), (Tally{0, 1}));
  EXPECT_EQ(r.per_bucket.at(diff::DiffSizeBucket::B0_39), (Tally{2, 2}));
  EXPECT_EQ(r.per_bucket.at(diff::DiffSizeBucket::B40_79), (Tally{1, 1}));
  EXPECT_EQ(r.per_bucket.at(diff::DiffSizeBucket::B120_159), (Tally{0, 1}));
  EXPECT_EQ(r.per_bucket.at(diff::DiffSizeBucket::B160_359), (Tally{0, 0}));
  EXPECT_FALSE(r.per_bucket.contains(diff::DiffSizeBucket::Overflow));
}

TEST(Score, LenientModeSwitchesHeadlinePrecision) {
  const auto r = score(four_case_fixture(), {PrecisionMode::Lenient, {}});
  EXPECT_EQ(r.precision, 0.75);
  EXPECT_EQ(r.precision_strict, 0.6);
}

TEST(Score, OverPredictionHalvesPrecision) {
  const auto r = score({{"x", K::RenameField, {K::MoveField, K::RenameField}, {}, 3}});
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.precision, 0.5);
}

TEST(Score, PerfectRun) {
  std::vector<CaseResult> results;
  for (int i = 0; i < 10; ++i) {
    const auto k = static_cast<K>(i);
    results.push_back({"case" + std::to_string(i), k, {k}, {}, i * 50});
  }
  const auto r = score(results);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.per_bucket.at(diff::DiffSizeBucket::Overflow), (Tally{2, 2}));  // 400 and 450
  int total = 0;
  for (const auto& [b, t] : r.per_bucket) total += t.total;
  EXPECT_EQ(total, 10);
}

TEST(Score, NoLabelsMeansZeroPrecision) {
  const auto r = score({{"x", K::RenameField, {}, {}, 3}});
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.precision, 0.0);
}

TEST(Score, Errors) {
  EXPECT_THROW(score({}), EmptyResults);
  EXPECT_THROW(score({{"a", K::RenameField, {}, {}, 0}, {"a", K::RenameClass, {}, {}, 0}}),
               DuplicateCase);
}

TEST(Score, AggregationOverDisjointLists) {
  const auto all = four_case_fixture();
  const std::vector<CaseResult> left(all.begin(), all.begin() + 2);
  const std::vector<CaseResult> right(all.begin() + 2, all.end());
  const auto whole = score(all), a = score(left), b = score(right);
  for (const auto& [kind, t] : whole.per_kind) {
    Tally merged;
    for (const auto* part : {&a, &b}) {
      if (auto it = part->per_kind.find(kind); it != part->per_kind.end()) {
        merged.correct += it->second.correct;
        merged.total += it->second.total;
      }
    }
    EXPECT_EQ(merged, t);
  }
  EXPECT_EQ(whole.labels_correct, a.labels_correct + b.labels_correct);
  EXPECT_EQ(whole.correct_cases, a.correct_cases + b.correct_cases);
}

TEST(Emit, MarkdownHasKindRowsFooterAndFiveBuckets) {
  auto r = score(four_case_fixture());
  r.detector_id = "structural";
  const std::string md = emit(r, Format::Markdown);
  for (const char* needle :
       {"| Rename Class | 1 | 1 | 100.0% |", "| Push Down Method | 0 | 1 | 0.0% |",
        "| **Recall** | 3 | 4 | 75.0% |", "| **Precision** | 3 | 5 | 60.0% |", "| 0-39 |",
        "| 40-79 |", "| 80-119 |", "| 120-159 |", "| 160-359 | 0 | 0 |", "added + removed"}) {
    EXPECT_NE(md.find(needle), std::string::npos) << needle << "\n" << md;
  }
  EXPECT_EQ(md.find(">359"), std::string::npos);
}

TEST(Emit, JsonRoundTripsAndCsvCarriesTheSameNumbers) {
  auto r = score(four_case_fixture());
  r.detector_id = "mock-echo";
  r.corpus = {42, 50, 4, "0.1.0", "0123456789abcdef"};
  EXPECT_EQ(report_from_json(emit(r, Format::Json)), r);
  const std::string csv = emit(r, Format::Csv);
  EXPECT_NE(csv.find("0.75"), std::string::npos) << csv;
  EXPECT_NE(csv.find("0.6"), std::string::npos) << csv;
  EXPECT_NE(csv.find("kind,push-down-method,0,1,"), std::string::npos);
  EXPECT_THROW(report_from_json("{}"), std::invalid_argument);
}

TEST(Format, Names) {
  EXPECT_EQ(format_from_string("md"), Format::Markdown);
  EXPECT_EQ(format_from_string("json"), Format::Json);
  EXPECT_FALSE(format_from_string("xml").has_value());
  EXPECT_EQ(extension(Format::Csv), "csv");
}

}  // namespace
}  // namespace refdet::eval
