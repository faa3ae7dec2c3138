#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <set>

#include "refdet/catalog.hpp"
#include "test_support.hpp"

namespace refdet {
namespace {

TEST(Catalog, HasNineteenRowsInTableOrder) {
  const auto defs = catalog();
  ASSERT_EQ(defs.size(), 19u);
  EXPECT_EQ(defs[1].definition, "Makes a field private and adds getter and setter methods.");
  EXPECT_EQ(defs[17].display_name, "Rename Class");
  EXPECT_EQ(defs[0].display_name, "Add Method Parameter");
  EXPECT_EQ(defs[18].display_name, "Replace Magic Number with Constant");
  for (std::size_t i = 0; i < defs.size(); ++i) {
    EXPECT_EQ(static_cast<std::size_t>(defs[i].kind), i);
  }
}

TEST(Catalog, DefinitionsEndWithPeriodAndNamesAreUnique) {
  std::set<std::string_view> names;
  for (const auto& d : catalog()) {
    ASSERT_FALSE(d.definition.empty());
    EXPECT_EQ(d.definition.back(), '.') << d.display_name;
    EXPECT_TRUE(names.insert(d.display_name).second) << d.display_name;
  }
}

TEST(Catalog, RenderedDefinitionsMatchGolden) {
  const std::string expected = testing::slurp(testing::golden_dir() / "definitions.txt");
  EXPECT_EQ(render_definitions(catalog()), expected);
}

TEST(Catalog, RenderSingleEntry) {
  const auto one = catalog().subspan(1, 1);
  EXPECT_EQ(render_definitions(one),
            "- Encapsulate Field: Makes a field private and adds getter and setter methods.");
  EXPECT_THROW(render_definitions({}), std::invalid_argument);
}

TEST(Catalog, TenGeneratedKinds) {
  const auto kinds = generated_kinds();
  EXPECT_EQ(kinds.size(), 10u);
  EXPECT_TRUE(is_generated_kind(RefactoringKind::PushDownMethod));
  EXPECT_FALSE(is_generated_kind(RefactoringKind::MoveField));
  EXPECT_FALSE(is_generated_kind(RefactoringKind::RenamePackage));
}

TEST(Catalog, SlugsRoundTrip) {
  for (const auto& d : catalog()) {
    const auto slug = kind_slug(d.kind);
    EXPECT_EQ(kind_from_slug(slug), d.kind) << slug;
  }
  EXPECT_EQ(kind_slug(RefactoringKind::RenameClass), "rename-class");
  EXPECT_FALSE(kind_from_slug("rename-type").has_value());
}

TEST(MatchLabel, PaperExamples) {
  EXPECT_EQ(match_label("Rename Class"), LabelMatch(Recognized{RefactoringKind::RenameClass}));
  EXPECT_EQ(match_label("pull down member"), LabelMatch(Unrecognized{"pull down member"}));
  EXPECT_EQ(match_label("RENAME   method."), LabelMatch(Recognized{RefactoringKind::RenameMethod}));
}

TEST(MatchLabel, AliasesFromAbbreviatedTableNames) {
  EXPECT_EQ(match_label("Add Parameter"),
            LabelMatch(Recognized{RefactoringKind::AddMethodParameter}));
  EXPECT_EQ(match_label("Add Met. Param."),
            LabelMatch(Recognized{RefactoringKind::AddMethodParameter}));
  EXPECT_EQ(match_label("Remove Parameter"),
            LabelMatch(Recognized{RefactoringKind::RemoveMethodParameter}));
  EXPECT_EQ(match_label("Rep. Magic Num. with Cons."),
            LabelMatch(Recognized{RefactoringKind::ReplaceMagicNumberWithConstant}));
}

TEST(MatchLabel, DirectionalMislabelsAndRenameTypeStayUnrecognized) {
  for (const char* raw : {"Push Up Field", "Pull Down Method", "Rename Type"}) {
    EXPECT_TRUE(std::holds_alternative<Unrecognized>(match_label(raw))) << raw;
  }
}

TEST(MatchLabel, BlankInputThrows) {
  EXPECT_THROW(match_label(""), InvalidLabel);
  EXPECT_THROW(match_label("  \t "), InvalidLabel);
}

TEST(MatchLabel, EveryDisplayNameIsRecognized) {
  for (const auto& d : catalog()) {
    EXPECT_EQ(match_label(d.display_name), LabelMatch(Recognized{d.kind})) << d.display_name;
  }
}

TEST(MatchLabel, CaseAndDecorationDoNotChangeClassification) {
  const char* samples[] = {"Move Method", "encapsulate field", "Pull Up Field", "Inline Class",
                           "Push Down Member", "Rename Type", "Extract  Superclass"};
  for (const char* s : samples) {
    std::string upper(s);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    const auto base = match_label(s);
    for (const std::string& variant : {upper, "  " + std::string(s) + ". ", "*" + upper + "*"}) {
      const auto m = match_label(variant);
      ASSERT_EQ(base.index(), m.index()) << variant;
      if (const auto* r = std::get_if<Recognized>(&base)) {
        EXPECT_EQ(std::get<Recognized>(m).kind, r->kind);
      } else {
        EXPECT_EQ(std::get<Unrecognized>(m).raw_text, variant);
      }
    }
  }
}

TEST(MatchLabel, AliasTableIsInjective) {
  std::set<std::string> keys;
  for (const auto& a : label_aliases()) {
    EXPECT_TRUE(keys.insert(normalize_label(a.alias)).second) << a.alias;
  }
  for (const auto& d : catalog()) {
    const std::string key = normalize_label(d.display_name);
    for (const auto& a : label_aliases()) {
      if (normalize_label(a.alias) == key) {
        EXPECT_EQ(a.kind, d.kind);
      }
    }
  }
}

}  // namespace
}  // namespace refdet
