#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace refdet {

// Order matches the canonical catalog table row order.
enum class RefactoringKind {
  AddMethodParameter,
  EncapsulateField,
  ExtractClass,
  ExtractInterface,
  ExtractSuperclass,
  InlineClass,
  InlineMethod,
  MoveField,
  MoveMethod,
  PullUpField,
  PullUpMethod,
  PushDownField,
  PushDownMethod,
  RemoveMethodParameter,
  RenameField,
  RenameMethod,
  RenamePackage,
  RenameClass,
  ReplaceMagicNumberWithConstant,
};

inline constexpr std::size_t kRefactoringKindCount = 19;

struct RefactoringDefinition {
  RefactoringKind kind;
  std::string_view display_name;
  std::string_view definition;
};

/// All 19 catalog entries in table order. The returned span is static.
std::span<const RefactoringDefinition> catalog();

const RefactoringDefinition& definition_of(RefactoringKind kind);
std::string_view display_name(RefactoringKind kind);

/// Kebab-case identifier used on the command line and in JSON files,
/// e.g. "rename-class".
std::string_view kind_slug(RefactoringKind kind);
std::optional<RefactoringKind> kind_from_slug(std::string_view slug);

/// The ten kinds the corpus generator knows how to apply.
std::span<const RefactoringKind> generated_kinds();
bool is_generated_kind(RefactoringKind kind);

/// Renders "- <display_name>: <definition>" lines joined by '\n' (no
/// trailing newline). Throws std::invalid_argument on an empty list.
std::string render_definitions(std::span<const RefactoringDefinition> defs);

class InvalidLabel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Recognized {
  RefactoringKind kind;
  friend bool operator==(const Recognized&, const Recognized&) = default;
};

struct Unrecognized {
  std::string raw_text;
  friend bool operator==(const Unrecognized&, const Unrecognized&) = default;
};

using LabelMatch = std::variant<Recognized, Unrecognized>;

/// Maps a free-text label onto a catalog kind. Matching ignores case,
/// whitespace and punctuation and consults a fixed alias table.
/// Throws InvalidLabel when `raw` is blank.
LabelMatch match_label(std::string_view raw);

/// Lowercase alphanumerics only: the key used for label comparison.
std::string normalize_label(std::string_view raw);

struct LabelAlias {
  std::string_view alias;
  RefactoringKind kind;
};
std::span<const LabelAlias> label_aliases();

}  // namespace refdet
