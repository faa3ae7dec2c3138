#include <gtest/gtest.h>

#include <set>

#include "refdet/generate.hpp"
#include "refdet/random.hpp"
#include "refdet/resolve.hpp"
#include "refdet/syntax.hpp"
#include "test_support.hpp"

namespace refdet::gen {
namespace {

using syntax::print;
using testing::program;

std::string joined(const syntax::Program& p) {
  std::string out;
  for (const auto& u : p) out += print(u);
  return out;
}

TEST(GeneratorConfig, Validation) {
  GeneratorConfig ok;
  EXPECT_NO_THROW(ok.validate());
  auto bad = ok;
  bad.classes_min = 4;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.inheritance_probability = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.target_loc_min = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(GenerateProgram, SeedOneMatchesFrozenFixture) {
  GeneratorConfig config;
  config.seed = 1;
  RandomStream stream(1);
  const std::string text = joined(generate_program(config, stream));
  EXPECT_EQ(text, testing::slurp(testing::golden_dir() / "program_seed1.mj"));
}

TEST(GenerateProgram, DeterministicAndWithinLocWindow) {
  GeneratorConfig config;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    config.seed = seed;
    RandomStream a(seed), b(seed);
    const auto p = generate_program(config, a);
    ASSERT_EQ(p, generate_program(config, b));
    ASSERT_TRUE(syntax::resolves(p));
    const int loc = syntax::program_loc(p);
    EXPECT_GE(loc, config.target_loc_min - config.loc_slack) << seed;
    EXPECT_LE(loc, config.target_loc_max + config.loc_slack) << seed;
    EXPECT_GE(static_cast<int>(p.size()), config.classes_min);
    EXPECT_LE(static_cast<int>(p.size()), config.classes_max);
  }
}

TEST(GenerateProgram, ZeroInheritanceProbabilityMeansNoSuperclass) {
  GeneratorConfig config;
  config.inheritance_probability = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream stream(seed);
    for (const auto& unit : generate_program(config, stream)) {
      for (const auto& c : unit.classes) EXPECT_FALSE(c.superclass.has_value()) << c.name;
    }
  }
}

TEST(GenerateProgram, SingleClassConfig) {
  GeneratorConfig config;
  config.classes_min = config.classes_max = 1;
  config.target_loc_min = 4;
  config.target_loc_max = 14;
  RandomStream stream(3);
  EXPECT_EQ(generate_program(config, stream).size(), 1u);
}

TEST(GenerateProgram, ImpossibleWindowExhausts) {
  GeneratorConfig config;
  config.classes_min = config.classes_max = 1;
  config.fields_per_class_max = 1;
  config.methods_per_class_max = 1;
  config.target_loc_min = 200;
  config.target_loc_max = 300;
  RandomStream stream(5);
  EXPECT_THROW(generate_program(config, stream), GenerationExhausted);
}

TEST(ApplyRefactoring, RenameClassRewritesEveryTypeReference) {
  const auto before = program({"package p; class Shape { Shape next; int sides; }",
                               "package p; class Canvas { Shape s = new Shape(); }"});
  TransformationCase c;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomStream s(seed);
    auto r = apply_refactoring(before, RefactoringKind::RenameClass, s);
    c = std::get<TransformationCase>(r);
    if (c.subject.source_class == "Shape") break;
  }
  EXPECT_EQ(c.subject.new_name, "ShapeR01");
  const std::string after = joined(c.after);
  EXPECT_EQ(after.find("Shape "), std::string::npos) << after;
  EXPECT_NE(after.find("class ShapeR01 {"), std::string::npos);
  EXPECT_NE(after.find("new ShapeR01()"), std::string::npos);
  EXPECT_TRUE(syntax::resolves(c.after));
  EXPECT_EQ(audit_case(c), std::nullopt);
}

TEST(ApplyRefactoring, PullUpFieldCollisionIsNotApplicable) {
  const auto before = program({"package p; class Base { int total; }",
                               "package p; class Leaf extends Base { int total; }"});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream s(seed);
    EXPECT_TRUE(std::holds_alternative<NotApplicable>(
        apply_refactoring(before, RefactoringKind::PullUpField, s)));
  }
}

TEST(ApplyRefactoring, EncapsulateFieldAddsAccessorsAndRewritesAccesses) {
  const auto before = program({"package p; class Counter { public int count; }",
                               "package p; class User { private Counter c; "
                               "int read() { return c.count; } void reset() { c.count = 3; } }"});
  RandomStream s(9);
  const auto c = std::get<TransformationCase>(
      apply_refactoring(before, RefactoringKind::EncapsulateField, s));
  EXPECT_EQ(c.subject.member, "count");
  EXPECT_EQ(c.subject.added_members, (std::vector<std::string>{"getCount", "setCount"}));
  EXPECT_EQ(print(c.after[0]),
            "package p;\n\nclass Counter {\n    private int count;\n"
            "    public int getCount() {\n        return count;\n    }\n"
            "    public void setCount(int count) {\n        this.count = count;\n    }\n}\n");
  const std::string user = print(c.after[1]);
  EXPECT_NE(user.find("return c.getCount();"), std::string::npos) << user;
  EXPECT_NE(user.find("c.setCount(3);"), std::string::npos) << user;
  EXPECT_EQ(audit_case(c), std::nullopt);
}

TEST(ApplyRefactoring, NonGeneratedKindsThrow) {
  const auto before = program({"package p; class A { int f; }"});
  RandomStream s(1);
  for (auto kind : {RefactoringKind::MoveField, RefactoringKind::InlineMethod,
                    RefactoringKind::RenamePackage, RefactoringKind::ExtractClass}) {
    EXPECT_THROW(apply_refactoring(before, kind, s), InvalidKind);
  }
}

TEST(ApplyRefactoring, SingleClassProgramsHaveNoHierarchyMoves) {
  const auto before = program({"package p; class A { int f; int g() { return f; } }"});
  RandomStream s(1);
  for (auto kind : {RefactoringKind::PullUpField, RefactoringKind::PullUpMethod,
                    RefactoringKind::PushDownField, RefactoringKind::PushDownMethod,
                    RefactoringKind::MoveMethod}) {
    EXPECT_TRUE(std::holds_alternative<NotApplicable>(apply_refactoring(before, kind, s)));
  }
}

TEST(Audit, RejectsTamperedCases) {
  const auto before = program({"package p; class A { int f; int g() { return f; } }",
                               "package p; class B { A a; int h() { return a.g(); } }"});
  RandomStream s(4);
  auto c = std::get<TransformationCase>(apply_refactoring(before, RefactoringKind::RenameMethod, s));
  ASSERT_EQ(audit_case(c), std::nullopt);

  auto wrong_kind = c;
  wrong_kind.kind = RefactoringKind::RenameField;
  EXPECT_TRUE(audit_case(wrong_kind).has_value());

  auto identity = c;
  identity.after = identity.before;
  EXPECT_TRUE(audit_case(identity).has_value());

  auto extra_edit = c;
  syntax::find_class(extra_edit.after, "A")->fields[0].type_name = "boolean";
  EXPECT_TRUE(audit_case(extra_edit).has_value());

  auto hard = c;
  hard.hard = true;
  EXPECT_TRUE(audit_case(hard).has_value());
}

TEST(BuildCorpus, DeterministicWithUniqueIds) {
  GeneratorConfig config;
  config.seed = 3;
  const auto a = build_corpus(config, 8);
  const auto b = build_corpus(config, 8);
  EXPECT_EQ(a, b);
  std::set<std::string> ids;
  for (const auto& c : a.cases) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    EXPECT_NE(c.before, c.after);
    EXPECT_TRUE(syntax::resolves(c.before));
    EXPECT_TRUE(syntax::resolves(c.after));
    EXPECT_EQ(audit_case(c), std::nullopt) << c.id;
    EXPECT_TRUE(!c.hard || c.kind == RefactoringKind::PushDownMethod);
  }
  EXPECT_LE(a.cases.size(), 80u);
  EXPECT_EQ(a.stats.size(), 10u);
  EXPECT_TRUE(std::is_sorted(a.cases.begin(), a.cases.end(),
                             [](const auto& x, const auto& y) { return x.id < y.id; }));
}

TEST(BuildCorpus, KindSubsetReproducesTheSameCases) {
  GeneratorConfig config;
  config.seed = 5;
  const auto all = build_corpus(config, 6);
  const auto only = build_corpus(config, 6, {RefactoringKind::RenameClass});
  std::vector<TransformationCase> expected;
  for (const auto& c : all.cases) {
    if (c.kind == RefactoringKind::RenameClass) expected.push_back(c);
  }
  EXPECT_EQ(only.cases, expected);
  ASSERT_EQ(only.stats.size(), 1u);
}

TEST(BuildCorpus, StatsAddUp) {
  GeneratorConfig config;
  config.seed = 9;
  const auto corpus = build_corpus(config, 10);
  int accepted = 0;
  for (const auto& s : corpus.stats) {
    EXPECT_EQ(s.attempts, s.accepted + s.generation_failures + s.not_applicable +
                              s.resolution_rejects + s.audit_rejects)
        << kind_slug(s.kind);
    EXPECT_LE(s.attempts, kAttemptBudgetFactor * s.requested);
    accepted += s.accepted;
  }
  EXPECT_EQ(accepted, static_cast<int>(corpus.cases.size()));
}

TEST(BuildCorpus, SingleClassConfigExhaustsHierarchyKinds) {
  GeneratorConfig config;
  config.classes_min = config.classes_max = 1;
  config.target_loc_min = 4;
  config.target_loc_max = 14;
  const auto corpus = build_corpus(config, 1);
  std::set<RefactoringKind> exhausted;
  for (const auto& s : corpus.exhausted()) exhausted.insert(s.kind);
  for (auto kind : {RefactoringKind::PullUpField, RefactoringKind::PullUpMethod,
                    RefactoringKind::PushDownField, RefactoringKind::PushDownMethod,
                    RefactoringKind::MoveMethod}) {
    EXPECT_TRUE(exhausted.contains(kind)) << kind_slug(kind);
  }
  EXPECT_FALSE(exhausted.contains(RefactoringKind::RenameClass));
}

TEST(BuildCorpus, RejectsBadArguments) {
  GeneratorConfig config;
  EXPECT_THROW(build_corpus(config, 0), std::invalid_argument);
  EXPECT_THROW(build_corpus(config, 1, {RefactoringKind::InlineClass}), InvalidKind);
}

TEST(CaseId, StableShape) {
  const std::string id = case_id(42, RefactoringKind::RenameField, 7);
  EXPECT_EQ(id.rfind("rename-field-0007-", 0), 0u) << id;
  EXPECT_EQ(id.size(), std::string("rename-field-0007-").size() + 8);
  EXPECT_EQ(id, case_id(42, RefactoringKind::RenameField, 7));
  EXPECT_NE(id, case_id(43, RefactoringKind::RenameField, 7));
}

}  // namespace
}  // namespace refdet::gen
