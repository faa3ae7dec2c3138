#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "refdet/ast.hpp"

namespace refdet::syntax {

enum class ResolutionErrorKind {
  UnknownType,
  UnknownMember,
  DuplicateMember,
  CyclicInheritance,
  AbstractInstantiation,
  ArityMismatch,
  TypeMismatch,
  AccessViolation,
  IncompatibleOverride,
  MissingImplementation,
};

std::string_view to_string(ResolutionErrorKind kind);

class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(ResolutionErrorKind kind, std::string locus, std::string detail);

  ResolutionErrorKind kind() const { return kind_; }
  const std::string& locus() const { return locus_; }

 private:
  ResolutionErrorKind kind_;
  std::string locus_;
};

// A member identified by its declaring class.
struct MemberRef {
  std::string owner;
  std::string name;
  friend bool operator==(const MemberRef&, const MemberRef&) = default;
  friend auto operator<=>(const MemberRef&, const MemberRef&) = default;
};

// Where an expression sits: enclosing class, enclosing method (null inside a
// field initializer) and the parameters/locals visible at that point.
struct ExprContext {
  std::string class_name;
  const MethodDecl* method = nullptr;
  std::map<std::string, std::string> locals;
};

class SymbolTable {
 public:
  const Program& program() const { return *program_; }

  const ClassDecl* find_class(std::string_view name) const;
  std::vector<std::string> class_names() const;

  std::optional<std::string> superclass(std::string_view cls) const;
  /// Superclass chain, nearest first.
  std::vector<std::string> ancestors(std::string_view cls) const;
  std::vector<std::string> direct_subclasses(std::string_view cls) const;
  std::vector<std::string> descendants(std::string_view cls) const;
  bool is_ancestor(std::string_view ancestor, std::string_view cls) const;
  /// True when the classes are equal or one inherits from the other.
  bool related(std::string_view a, std::string_view b) const;
  bool is_assignable(std::string_view from, std::string_view to) const;

  /// Nearest declaration walking up the superclass chain; subclass fields
  /// hide superclass fields of the same name.
  std::optional<MemberRef> lookup_field(std::string_view cls,
                                        std::string_view name) const;
  /// Nearest method declaration in the superclass chain, then in the
  /// implemented interfaces.
  std::optional<MemberRef> lookup_method(std::string_view cls,
                                         std::string_view name) const;
  const FieldDecl* field(const MemberRef& ref) const;
  const MethodDecl* method(const MemberRef& ref) const;

  /// Static type of `expr`, or nullopt when it does not resolve. Never throws.
  std::optional<std::string> type_of(const Expr& expr, const ExprContext& ctx) const;
  /// Field a NameRef or FieldAccess binds to (nullopt for locals).
  std::optional<MemberRef> field_binding(const Expr& expr,
                                         const ExprContext& ctx) const;
  /// Method a Call binds to.
  std::optional<MemberRef> method_binding(const Expr& expr,
                                          const ExprContext& ctx) const;

  /// Text rendering of the inheritance graph and every reference binding,
  /// in declaration order.
  std::string dump() const;

 private:
  friend SymbolTable resolve(const Program& units);
  friend class Resolver;

  std::shared_ptr<const Program> program_;
  std::map<std::string, const ClassDecl*, std::less<>> classes_;
  std::map<std::string, std::vector<std::string>, std::less<>> subclasses_;
  std::vector<std::string> bindings_;
};

/// Binds every name in the program and checks it the way a compiler would.
/// Throws the first ResolutionError in declaration order.
SymbolTable resolve(const Program& units);

/// True when `units` resolves without error.
bool resolves(const Program& units);

// Walks every expression in pre-order: a parent is visited before its
// children, and a rewriter that replaces a node sees the walker continue
// into the replacement's children. Field initializers are visited with a
// null method and no locals.
using ExprVisitor = std::function<void(const Expr&, const ExprContext&)>;
using ExprRewriter = std::function<void(Expr&, const ExprContext&)>;
using StmtRewriter = std::function<void(Stmt&, const ExprContext&)>;

void for_each_expr(const Program& program, const ExprVisitor& visit);
void for_each_expr(const ClassDecl& decl, const MethodDecl& method,
                   const ExprVisitor& visit);
void rewrite_program(Program& program, const ExprRewriter& on_expr,
                     const StmtRewriter& on_stmt = {});

/// Replaces every occurrence of a type name: declarations, extends and
/// implements clauses, member and local types, `new` expressions.
void substitute_type_name(Program& program, std::string_view from,
                          std::string_view to);

}  // namespace refdet::syntax
