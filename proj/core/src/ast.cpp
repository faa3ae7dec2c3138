#include "refdet/ast.hpp"

#include <algorithm>

namespace refdet::syntax {
namespace {

template <class Vec>
auto find_named(Vec& items, std::string_view name) -> decltype(&items.front()) {
  auto it = std::find_if(items.begin(), items.end(),
                         [name](const auto& item) { return item.name == name; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

const FieldDecl* ClassDecl::find_field(std::string_view name) const {
  return find_named(fields, name);
}
const MethodDecl* ClassDecl::find_method(std::string_view name) const {
  return find_named(methods, name);
}
FieldDecl* ClassDecl::find_field(std::string_view name) {
  return find_named(fields, name);
}
MethodDecl* ClassDecl::find_method(std::string_view name) {
  return find_named(methods, name);
}

std::string file_name(const CompilationUnit& unit) {
  const std::string stem = unit.classes.empty() ? "package-info" : unit.classes.front().name;
  return stem + std::string(kSourceExtension);
}

const ClassDecl* find_class(const Program& program, std::string_view name) {
  for (const auto& unit : program) {
    for (const auto& decl : unit.classes) {
      if (decl.name == name) return &decl;
    }
  }
  return nullptr;
}

ClassDecl* find_class(Program& program, std::string_view name) {
  for (auto& unit : program) {
    for (auto& decl : unit.classes) {
      if (decl.name == name) return &decl;
    }
  }
  return nullptr;
}

bool is_primitive_type(std::string_view type_name) {
  return type_name == "int" || type_name == "boolean";
}

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Public:
      return "public";
    case Visibility::Protected:
      return "protected";
    case Visibility::Private:
      return "private";
    case Visibility::Package:
      break;
  }
  return "package";
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

}  // namespace refdet::syntax
