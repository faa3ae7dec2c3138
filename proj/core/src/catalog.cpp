#include "refdet/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace refdet {
namespace {

using K = RefactoringKind;

constexpr std::array<RefactoringDefinition, kRefactoringKindCount> kCatalog{{
    {K::AddMethodParameter, "Add Method Parameter",
     "Introduces a new parameter to an existing method."},
    {K::EncapsulateField, "Encapsulate Field",
     "Makes a field private and adds getter and setter methods."},
    {K::ExtractClass, "Extract Class",
     "Moves a group of related fields and methods from an existing class into "
     "a newly created class."},
    {K::ExtractInterface, "Extract Interface",
     "Creates a new interface from existing method(s) in a class."},
    {K::ExtractSuperclass, "Extract Superclass",
     "Creates a new superclass to encapsulate shared attributes and behavior "
     "from two or more existing classes."},
    {K::InlineClass, "Inline Class",
     "Merges a class into another when it is too small or redundant."},
    {K::InlineMethod, "Inline Method",
     "Replaces a method call with the method's body."},
    {K::MoveField, "Move Field",
     "Relocates a field to a more appropriate class."},
    {K::MoveMethod, "Move Method",
     "Relocates a method to a more appropriate class."},
    {K::PullUpField, "Pull Up Field",
     "Moves a field from a child class to its parent class."},
    {K::PullUpMethod, "Pull Up Method",
     "Moves a method from a child class to its parent class."},
    {K::PushDownField, "Push Down Field",
     "Moves a field from a parent class to one or more child classes."},
    {K::PushDownMethod, "Push Down Method",
     "Moves a method from a parent class to one or more child classes."},
    {K::RemoveMethodParameter, "Remove Method Parameter",
     "Eliminates an existing parameter from a method signature."},
    {K::RenameField, "Rename Field",
     "Changes the name of a class or instance variable."},
    {K::RenameMethod, "Rename Method",
     "Changes the name of a method while preserving its behavior."},
    {K::RenamePackage, "Rename Package",
     "Changes the name of a package declaration."},
    {K::RenameClass, "Rename Class",
     "Changes the name of a class without altering its structure."},
    {K::ReplaceMagicNumberWithConstant, "Replace Magic Number with Constant",
     "Replaces a literal number with a named constant."},
}};

constexpr std::array<std::string_view, kRefactoringKindCount> kSlugs{
    "add-method-parameter",
    "encapsulate-field",
    "extract-class",
    "extract-interface",
    "extract-superclass",
    "inline-class",
    "inline-method",
    "move-field",
    "move-method",
    "pull-up-field",
    "pull-up-method",
    "push-down-field",
    "push-down-method",
    "remove-method-parameter",
    "rename-field",
    "rename-method",
    "rename-package",
    "rename-class",
    "replace-magic-number-with-constant",
};

// Abbreviated names that appear in the published tables.
constexpr std::array<LabelAlias, 4> kAliases{{
    {"Add Parameter", K::AddMethodParameter},
    {"Add Met. Param.", K::AddMethodParameter},
    {"Remove Parameter", K::RemoveMethodParameter},
    {"Rep. Magic Num. with Cons.", K::ReplaceMagicNumberWithConstant},
}};

constexpr std::array<RefactoringKind, 10> kGenerated{
    K::AddMethodParameter, K::EncapsulateField, K::MoveMethod,
    K::PullUpField,        K::PullUpMethod,     K::PushDownField,
    K::PushDownMethod,     K::RenameField,      K::RenameMethod,
    K::RenameClass,
};

std::map<std::string, RefactoringKind> build_label_index() {
  std::map<std::string, RefactoringKind> index;
  auto add = [&index](std::string_view label, RefactoringKind kind) {
    auto [it, inserted] = index.emplace(normalize_label(label), kind);
    if (!inserted && it->second != kind) {
      throw std::logic_error("label alias maps to two kinds: " +
                             std::string(label));
    }
  };
  for (const auto& def : kCatalog) add(def.display_name, def.kind);
  for (const auto& alias : kAliases) add(alias.alias, alias.kind);
  return index;
}

const std::map<std::string, RefactoringKind>& label_index() {
  static const auto index = build_label_index();
  return index;
}

}  // namespace

std::span<const RefactoringDefinition> catalog() { return kCatalog; }

const RefactoringDefinition& definition_of(RefactoringKind kind) {
  return kCatalog[static_cast<std::size_t>(kind)];
}

std::string_view display_name(RefactoringKind kind) {
  return definition_of(kind).display_name;
}

std::string_view kind_slug(RefactoringKind kind) {
  return kSlugs[static_cast<std::size_t>(kind)];
}

std::optional<RefactoringKind> kind_from_slug(std::string_view slug) {
  auto it = std::find(kSlugs.begin(), kSlugs.end(), slug);
  if (it == kSlugs.end()) return std::nullopt;
  return static_cast<RefactoringKind>(it - kSlugs.begin());
}

std::span<const RefactoringKind> generated_kinds() { return kGenerated; }

bool is_generated_kind(RefactoringKind kind) {
  return std::find(kGenerated.begin(), kGenerated.end(), kind) !=
         kGenerated.end();
}

std::string render_definitions(std::span<const RefactoringDefinition> defs) {
  if (defs.empty()) {
    throw std::invalid_argument("render_definitions: empty definition list");
  }
  std::string out;
  for (const auto& def : defs) {
    if (!out.empty()) out += '\n';
    out += "- ";
    out += def.display_name;
    out += ": ";
    out += def.definition;
  }
  return out;
}

std::string normalize_label(std::string_view raw) {
  std::string key;
  key.reserve(raw.size());
  for (unsigned char c : raw) {
    if (std::isalnum(c)) key += static_cast<char>(std::tolower(c));
  }
  return key;
}

LabelMatch match_label(std::string_view raw) {
  auto key = normalize_label(raw);
  if (key.empty()) {
    throw InvalidLabel("empty refactoring label");
  }
  const auto& index = label_index();
  if (auto it = index.find(key); it != index.end()) {
    return Recognized{it->second};
  }
  return Unrecognized{std::string(raw)};
}

std::span<const LabelAlias> label_aliases() { return kAliases; }

}  // namespace refdet
