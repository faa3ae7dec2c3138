#include <gtest/gtest.h>

#include "refdet/generate.hpp"
#include "refdet/random.hpp"
#include "refdet/resolve.hpp"
#include "refdet/syntax.hpp"
#include "test_support.hpp"

namespace refdet::syntax {
namespace {

using testing::program;

TEST(Parser, MinimalProgram) {
  const auto unit = parse("package p; class A { int f; }");
  EXPECT_EQ(unit.package_name, "p");
  ASSERT_EQ(unit.classes.size(), 1u);
  const auto& a = unit.classes[0];
  EXPECT_EQ(a.name, "A");
  ASSERT_EQ(a.fields.size(), 1u);
  EXPECT_EQ(a.fields[0].name, "f");
  EXPECT_EQ(a.fields[0].type_name, "int");
  EXPECT_EQ(a.fields[0].visibility, Visibility::Package);
}

TEST(Parser, UndeclaredSuperclassParsesButDoesNotResolve) {
  const auto unit = parse("package p; class A extends B {}");
  EXPECT_EQ(unit.classes[0].superclass, "B");
  try {
    resolve({unit});
    FAIL() << "expected ResolutionError";
  } catch (const ResolutionError& e) {
    EXPECT_EQ(e.kind(), ResolutionErrorKind::UnknownType);
  }
}

TEST(Parser, ErrorPointsAtTheBrace) {
  try {
    parse("package p;\nclass {");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 7);
    EXPECT_EQ(e.found(), "{");
  }
}

TEST(Parser, ReadsMethodsStatementsAndExpressions) {
  const auto unit = parse(R"(package shapes;
abstract class Shape implements Named {
    protected int sides = 3;
    private Shape next;
    public abstract int area();
    public boolean bigger(int limit, Shape other) {
        int total = this.sides * 2 + other.area();
        next = new Square();
        return total > limit && true;
    }
}
)");
  const auto& shape = unit.classes.at(0);
  EXPECT_TRUE(shape.is_abstract);
  EXPECT_EQ(shape.interfaces, std::vector<std::string>{"Named"});
  ASSERT_EQ(shape.methods.size(), 2u);
  EXPECT_TRUE(shape.methods[0].is_abstract);
  EXPECT_FALSE(shape.methods[0].body.has_value());
  const auto& bigger = shape.methods[1];
  ASSERT_EQ(bigger.params.size(), 2u);
  EXPECT_EQ(bigger.params[1].type_name, "Shape");
  ASSERT_TRUE(bigger.body.has_value());
  ASSERT_EQ(bigger.body->size(), 3u);
  EXPECT_TRUE(std::holds_alternative<LocalDecl>((*bigger.body)[0].node));
  EXPECT_TRUE(std::holds_alternative<Assign>((*bigger.body)[1].node));
  const auto& ret = std::get<Return>((*bigger.body)[2].node);
  const auto& top = std::get<Binary>(ret.value.node);
  EXPECT_EQ(top.op, BinaryOp::And);
}

TEST(Parser, RejectsMalformedInputs) {
  for (const char* bad : {"", "package p", "package p; class A { int }", "package p; class A { void f( }",
                          "package p; class A { void f() { return 1 } }", "package p; class A extends {}",
                          "package p; class A { int f; } }"}) {
    EXPECT_THROW(parse(bad), ParseError) << bad;
  }
}

TEST(Printer, EmptyClassCanonicalForm) {
  EXPECT_EQ(print(parse("package p; class A {}").classes[0]), "class A {\n}\n");
}

TEST(Printer, AbstractMethodEndsWithSemicolon) {
  const auto unit = parse("package p; abstract class A { abstract int size(); }");
  const std::string text = print(unit);
  EXPECT_NE(text.find("    abstract int size();\n"), std::string::npos) << text;
}

TEST(Printer, CanonicalLayout) {
  const auto unit = parse("package p;   class A{public int f=1;void g(){f=f+1;}}");
  EXPECT_EQ(print(unit),
            "package p;\n\nclass A {\n    public int f = 1;\n    void g() {\n        f = f + 1;\n"
            "    }\n}\n");
}

TEST(Printer, RoundTripsOverGeneratedUnits) {
  gen::GeneratorConfig config;
  int units = 0;
  for (std::uint64_t seed = 0; units < 1000; ++seed) {
    config.seed = seed;
    auto stream = RandomStream::derive(seed, "round-trip", 0);
    for (const auto& unit : gen::generate_program(config, stream)) {
      const std::string text = print(unit);
      ASSERT_EQ(parse(text), unit) << text;
      ASSERT_EQ(print(parse(text)), text);
      ++units;
    }
  }
  EXPECT_GE(units, 1000);
}

TEST(Resolver, SuperclassEdge) {
  const auto table = resolve(program({"package p; class A extends B {}", "package p; class B {}"}));
  EXPECT_EQ(table.superclass("A"), "B");
  EXPECT_EQ(table.direct_subclasses("B"), std::vector<std::string>{"A"});
  EXPECT_TRUE(table.is_ancestor("B", "A"));
  EXPECT_TRUE(table.related("A", "B"));
}

ResolutionErrorKind failure_of(const Program& p) {
  try {
    resolve(p);
  } catch (const ResolutionError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "program resolved";
  return ResolutionErrorKind::UnknownType;
}

TEST(Resolver, ErrorKinds) {
  EXPECT_EQ(failure_of(program({"package p; class A { int f; int f; }"})),
            ResolutionErrorKind::DuplicateMember);
  EXPECT_EQ(failure_of(program({"package p; class A extends B {}", "package p; class B extends A {}"})),
            ResolutionErrorKind::CyclicInheritance);
  EXPECT_EQ(failure_of(program({"package p; abstract class A {}",
                                "package p; class B { A a = new A(); }"})),
            ResolutionErrorKind::AbstractInstantiation);
  EXPECT_EQ(failure_of(program({"package p; class A { int g() { return h; } }"})),
            ResolutionErrorKind::UnknownMember);
  EXPECT_EQ(failure_of(program({"package p; class A { Missing m; }"})),
            ResolutionErrorKind::UnknownType);
  EXPECT_EQ(failure_of(program({"package p; class A { int g() { return 1; } void h() { g(3); } }"})),
            ResolutionErrorKind::ArityMismatch);
}

TEST(Resolver, SubclassFieldHidesSuperclassField) {
  const auto table = resolve(program({"package p; class A { int v; }",
                                      "package p; class B extends A { boolean v; }",
                                      "package p; class C extends B {}"}));
  EXPECT_EQ(table.lookup_field("C", "v"), (MemberRef{"B", "v"}));
  EXPECT_EQ(table.lookup_field("A", "v"), (MemberRef{"A", "v"}));
  EXPECT_FALSE(table.lookup_field("C", "w").has_value());
}

TEST(Resolver, BindsCallsToNearestDeclaration) {
  const auto p = program({"package p; class A { int run() { return 1; } }",
                          "package p; class B extends A { int go() { return run(); } }"});
  const auto table = resolve(p);
  std::vector<MemberRef> calls;
  for_each_expr(p, [&](const Expr& e, const ExprContext& ctx) {
    if (std::holds_alternative<Call>(e.node)) calls.push_back(*table.method_binding(e, ctx));
  });
  EXPECT_EQ(calls, std::vector<MemberRef>{(MemberRef{"A", "run"})});
}

TEST(Resolver, DeterministicAcrossRuns) {
  gen::GeneratorConfig config;
  config.seed = 11;
  auto stream = RandomStream::derive(11, "resolve", 0);
  const auto p = gen::generate_program(config, stream);
  const std::string first = resolve(p).dump();
  EXPECT_FALSE(first.empty());
  for (int run = 0; run < 10; ++run) EXPECT_EQ(resolve(p).dump(), first);
}

TEST(Resolver, SubstituteTypeNameTouchesEveryReference) {
  auto p = program({"package p; class A { A self; A make() { A a = new A(); return a; } }",
                    "package p; class B extends A implements I {}",
                    "package p; interface I {}"});
  substitute_type_name(p, "A", "Z");
  const std::string text = print(p[0]) + print(p[1]);
  EXPECT_EQ(text.find(" A"), std::string::npos) << text;
  EXPECT_TRUE(resolves(p));
}

}  // namespace
}  // namespace refdet::syntax
