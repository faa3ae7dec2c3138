#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "refdet/ast.hpp"
#include "refdet/catalog.hpp"
#include "refdet/random.hpp"

namespace refdet::gen {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int classes_min = 2;
  int classes_max = 3;
  int fields_per_class_max = 2;
  int methods_per_class_max = 2;
  double inheritance_probability = 0.6;
  // Probability that a class with subclasses is declared abstract.
  double abstract_probability = 0.3;
  int target_loc_min = 14;
  int target_loc_max = 34;
  // Accepted programs may fall this many lines outside the target range.
  int loc_slack = 6;
  std::string package_name = "p";

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

class GenerationExhausted : public std::runtime_error {
 public:
  explicit GenerationExhausted(int drafts);
  int drafts() const { return drafts_; }

 private:
  int drafts_;
};

class InvalidKind : public std::invalid_argument {
 public:
  explicit InvalidKind(RefactoringKind kind);
};

inline constexpr int kMaxDrafts = 100;

/// Draws a program of one class per compilation unit. Drafts that fail to
/// resolve or miss the LOC window are redrawn; after kMaxDrafts rejections
/// GenerationExhausted is thrown.
syntax::Program generate_program(const GeneratorConfig& config, RandomStream& stream);

// What a transformation touched, in before-program names.
struct CaseSubject {
  std::string source_class;
  // Member name; empty for class-level refactorings.
  std::string member;
  // New class/member name for renames, new parameter for AddMethodParameter.
  std::string new_name;
  // Receiving classes for moves, pull ups and push downs.
  std::vector<std::string> target_classes;
  // Accessors created by EncapsulateField (getter, setter).
  std::vector<std::string> added_members;

  friend bool operator==(const CaseSubject&, const CaseSubject&) = default;
};

struct TransformationCase {
  std::string id;
  RefactoringKind kind;
  // Reproduces a documented ambiguity (push down that keeps an abstract stub).
  bool hard = false;
  syntax::Program before;
  syntax::Program after;
  CaseSubject subject;

  friend bool operator==(const TransformationCase&, const TransformationCase&) = default;
};

struct NotApplicable {
  std::string reason;
};

using ApplyResult = std::variant<TransformationCase, NotApplicable>;

/// Applies one refactoring of `kind` to a randomly chosen eligible element.
/// The returned case has an empty id. Throws InvalidKind for kinds outside
/// generated_kinds().
ApplyResult apply_refactoring(const syntax::Program& program, RefactoringKind kind,
                              RandomStream& stream);

/// Independent check that `c.after` is what the named mechanic should
/// produce from `c.before`. Returns the first violated condition.
std::optional<std::string> audit_case(const TransformationCase& c);

struct KindStats {
  RefactoringKind kind;
  int requested = 0;
  int attempts = 0;
  int accepted = 0;
  int generation_failures = 0;
  int not_applicable = 0;
  int resolution_rejects = 0;
  int audit_rejects = 0;
  bool budget_exhausted() const { return accepted < requested; }

  friend bool operator==(const KindStats&, const KindStats&) = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  GeneratorConfig config;
  int per_kind = 0;
  std::vector<RefactoringKind> kinds;
  std::string tool_version;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Corpus {
  std::vector<TransformationCase> cases;  // sorted by id
  Provenance provenance;
  std::vector<KindStats> stats;

  /// Kinds that did not reach per_kind within the attempt budget.
  std::vector<KindStats> exhausted() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline constexpr int kAttemptBudgetFactor = 20;

/// Builds up to per_kind valid cases for each kind (all generated kinds when
/// `kinds` is empty) within kAttemptBudgetFactor * per_kind attempts. Kinds
/// run concurrently; every attempt draws from its own derived stream, so
/// the result is a pure function of the arguments.
Corpus build_corpus(const GeneratorConfig& config, int per_kind,
                    std::vector<RefactoringKind> kinds = {});

/// "<kind-slug>-<attempt:04>-<8 hex digits>".
std::string case_id(std::uint64_t seed, RefactoringKind kind, int attempt);

}  // namespace refdet::gen
