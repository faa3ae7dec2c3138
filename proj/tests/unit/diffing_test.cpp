#include <gtest/gtest.h>

#include "refdet/diffing.hpp"
#include "refdet/generate.hpp"
#include "refdet/random.hpp"
#include "test_support.hpp"

namespace refdet::diff {
namespace {

using testing::apply_patch;

TEST(ComputeDiff, IdenticalSetsGiveEmptyDiff) {
  const FileSet files{{"A.mj", "class A {\n}\n"}, {"B.mj", "x\ny\n"}};
  const auto d = compute_diff(files, files);
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(render_diff(d), "");
  EXPECT_EQ(diff_loc(d), 0);
}

TEST(ComputeDiff, SingleLineChangeRendersOneHunk) {
  std::string before, after;
  for (int i = 1; i <= 12; ++i) {
    before += "line " + std::to_string(i) + "\n";
    after += (i == 6 ? std::string("changed") : "line " + std::to_string(i)) + "\n";
  }
  const auto d = compute_diff({{"F.mj", before}}, {{"F.mj", after}});
  ASSERT_EQ(d.files.size(), 1u);
  ASSERT_EQ(d.files[0].hunks.size(), 1u);
  EXPECT_EQ(diff_loc(d), 2);
  EXPECT_EQ(render_diff(d),
            "--- a/F.mj\n+++ b/F.mj\n@@ -3,7 +3,7 @@\n line 3\n line 4\n line 5\n-line 6\n"
            "+changed\n line 7\n line 8\n line 9\n");
}

TEST(ComputeDiff, DeletedAndAddedFiles) {
  const auto d = compute_diff({{"Old.mj", "a\nb\n"}}, {{"New.mj", "c\n"}});
  EXPECT_EQ(render_diff(d),
            "--- /dev/null\n+++ b/New.mj\n@@ -0,0 +1,1 @@\n+c\n"
            "--- a/Old.mj\n+++ /dev/null\n@@ -1,2 +0,0 @@\n-a\n-b\n");
  EXPECT_EQ(diff_loc(d), 3);
}

TEST(ComputeDiff, MissingFinalNewline) {
  const FileSet before{{"F", "a\nb"}};
  const FileSet after{{"F", "a\nc"}};
  const std::string text = render_diff(compute_diff(before, after));
  EXPECT_EQ(text,
            "--- a/F\n+++ b/F\n@@ -1,2 +1,2 @@\n a\n-b\n\\ No newline at end of file\n+c\n"
            "\\ No newline at end of file\n");
  EXPECT_EQ(apply_patch(before, text), after);
  EXPECT_EQ(parse_diff(text), compute_diff(before, after));
}

TEST(ComputeDiff, DistantChangesSplitIntoHunks) {
  std::string before, after;
  for (int i = 0; i < 30; ++i) {
    before += std::to_string(i) + "\n";
    after += (i == 2 || i == 25 ? "x" : std::to_string(i)) + std::string("\n");
  }
  const auto d = compute_diff({{"F", before}}, {{"F", after}});
  EXPECT_EQ(d.files[0].hunks.size(), 2u);
  const auto zero = compute_diff({{"F", before}}, {{"F", after}}, 0);
  EXPECT_EQ(zero.files[0].hunks.size(), 2u);
  EXPECT_EQ(zero.files[0].hunks[0].lines.size(), 2u);
}

TEST(ComputeDiff, PatchOracleOnRandomEdits) {
  RandomStream rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    FileSet before, after;
    const int files = rng.uniform(1, 3);
    for (int f = 0; f < files; ++f) {
      std::string a, b;
      const int n = rng.uniform(0, 25);
      for (int i = 0; i < n; ++i) {
        const std::string line = "v" + std::to_string(rng.below(6));
        a += line + "\n";
        switch (rng.below(4)) {
          case 0: break;
          case 1: b += "w" + std::to_string(rng.below(4)) + "\n"; break;
          case 2: b += line + "\n" + "n" + std::to_string(rng.below(3)) + "\n"; break;
          default: b += line + "\n";
        }
      }
      if (rng.chance(0.2) && !a.empty()) a.pop_back();
      if (rng.chance(0.2) && !b.empty()) b.pop_back();
      const std::string name = "F" + std::to_string(f);
      if (!rng.chance(0.1)) before[name] = a;
      if (!rng.chance(0.1)) after[name] = b;
    }
    const auto d = compute_diff(before, after, static_cast<int>(rng.below(4)));
    const std::string text = render_diff(d);
    FileSet patched;
    ASSERT_NO_THROW(patched = apply_patch(before, text)) << text;
    // A file emptied but still present is indistinguishable from one left alone
    // by the patch; compare contents of the files that exist after.
    for (const auto& [path, content] : after) EXPECT_EQ(patched[path], content) << text;
    EXPECT_EQ(parse_diff(text), d) << text;
  }
}

TEST(ComputeDiff, PatchOracleOnCorpusCases) {
  gen::GeneratorConfig config;
  config.seed = 21;
  for (const auto& c : gen::build_corpus(config, 10).cases) {
    const auto before = program_files(c.before);
    const auto after = program_files(c.after);
    const auto d = compute_diff(before, after);
    ASSERT_EQ(apply_patch(before, render_diff(d)), after) << c.id;
    EXPECT_GT(diff_loc(d), 0);
  }
}

TEST(ParseDiff, RejectsBrokenText) {
  EXPECT_THROW(parse_diff("garbage\n"), DiffParseError);
  EXPECT_THROW(parse_diff("--- a/F\n+++ b/F\n@@ -1,2 +1,2 @@\n a\n"), DiffParseError);
  EXPECT_THROW(parse_diff("--- a/F\n+++ b/F\n@@ -1 +1 @@\n?x\n"), DiffParseError);
  EXPECT_TRUE(parse_diff("").empty());
}

TEST(DiffLoc, ContextExcludedAndMonotone) {
  UnifiedDiff d;
  FileDiff f{"F", FileChange::Modified, {}};
  Hunk h;
  for (int i = 0; i < 12; ++i) h.lines.push_back({LineTag::Context, "c", false});
  for (int i = 0; i < 3; ++i) h.lines.push_back({LineTag::Added, "a", false});
  for (int i = 0; i < 2; ++i) h.lines.push_back({LineTag::Removed, "r", false});
  f.hunks.push_back(h);
  d.files.push_back(f);
  EXPECT_EQ(diff_loc(d), 5);
  EXPECT_EQ(bucket_of(diff_loc(d)), DiffSizeBucket::B0_39);
  d.files[0].hunks.push_back(h);
  EXPECT_EQ(diff_loc(d), 10);
}

TEST(Buckets, PartitionZeroToThousand) {
  const std::pair<int, int> ranges[] = {{0, 39}, {40, 79}, {80, 119}, {120, 159}, {160, 359}};
  for (int n = 0; n <= 1000; ++n) {
    int hits = 0;
    DiffSizeBucket expected = DiffSizeBucket::Overflow;
    for (std::size_t b = 0; b < 5; ++b) {
      if (n >= ranges[b].first && n <= ranges[b].second) {
        ++hits;
        expected = static_cast<DiffSizeBucket>(b);
      }
    }
    ASSERT_LE(hits, 1);
    ASSERT_EQ(bucket_of(n), expected) << n;
  }
}

TEST(Buckets, Labels) {
  EXPECT_EQ(bucket_label(DiffSizeBucket::B0_39), "0-39");
  EXPECT_EQ(bucket_label(DiffSizeBucket::B160_359), "160-359");
  EXPECT_EQ(bucket_label(DiffSizeBucket::Overflow), ">359");
  BucketBounds wide;
  wide.upper = {49, 99, 149, 199, 499};
  EXPECT_NO_THROW(wide.validate());
  EXPECT_EQ(bucket_of(45, wide), DiffSizeBucket::B0_39);
  EXPECT_EQ(bucket_label(DiffSizeBucket::B40_79, wide), "50-99");
  BucketBounds bad;
  bad.upper = {10, 5, 20, 30, 40};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace refdet::diff
