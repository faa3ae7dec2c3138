#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace refdet::syntax {

// Half-open line/column interval, 1-based. Spans are metadata: two nodes
// that differ only in where they came from compare equal.
struct SourceSpan {
  int begin_line = 0;
  int begin_column = 0;
  int end_line = 0;
  int end_column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

// Owning pointer with value semantics, used to break recursion in the
// expression tree.
namespace detail {
template <class T, class... Ts>
concept OneOf = (std::is_same_v<T, Ts> || ...);
}  // namespace detail

template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  template <class U>
    requires(!std::is_same_v<std::remove_cvref_t<U>, Box> &&
             !std::is_same_v<std::remove_cvref_t<U>, T> &&
             std::is_constructible_v<T, U &&>)
  Box(U&& value)  // NOLINT
      : ptr_(std::make_unique<T>(std::forward<U>(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

enum class Visibility { Package, Public, Protected, Private };

enum class BinaryOp { Add, Sub, Mul, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

struct Expr;

struct IntLit {
  std::int64_t value = 0;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct NameRef {
  std::string name;
  friend bool operator==(const NameRef&, const NameRef&) = default;
};

struct This {
  friend bool operator==(const This&, const This&) = default;
};

struct FieldAccess {
  Box<Expr> receiver;
  std::string name;
  friend bool operator==(const FieldAccess&, const FieldAccess&) = default;
};

// An absent receiver means an implicit `this`.
struct Call {
  std::optional<Box<Expr>> receiver;
  std::string name;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&) = default;
};

struct New {
  std::string class_name;
  friend bool operator==(const New&, const New&) = default;
};

struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary&, const Binary&) = default;
};

struct Expr {
  using Node =
      std::variant<IntLit, BoolLit, NameRef, This, FieldAccess, Call, New, Binary>;
  Node node;

  template <class T>
    requires detail::OneOf<std::remove_cvref_t<T>, IntLit, BoolLit, NameRef,
                           This, FieldAccess, Call, New, Binary>
  Expr(T&& value) : node(std::forward<T>(value)) {}  // NOLINT

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Return {
  Expr value;
  friend bool operator==(const Return&, const Return&) = default;
};

// target is a NameRef or a FieldAccess.
struct Assign {
  Expr target;
  Expr value;
  friend bool operator==(const Assign&, const Assign&) = default;
};

struct ExprStmt {
  Expr expr;
  friend bool operator==(const ExprStmt&, const ExprStmt&) = default;
};

struct LocalDecl {
  std::string name;
  std::string type_name;
  Expr init;
  friend bool operator==(const LocalDecl&, const LocalDecl&) = default;
};

struct Stmt {
  using Node = std::variant<Return, Assign, ExprStmt, LocalDecl>;
  Node node;

  template <class T>
    requires detail::OneOf<std::remove_cvref_t<T>, Return, Assign, ExprStmt,
                           LocalDecl>
  Stmt(T&& value) : node(std::forward<T>(value)) {}  // NOLINT

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Param {
  std::string name;
  std::string type_name;
  friend bool operator==(const Param&, const Param&) = default;
};

struct FieldDecl {
  std::string name;
  std::string type_name;
  Visibility visibility = Visibility::Package;
  std::optional<Expr> initializer;
  SourceSpan span;
  friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

// body is absent iff is_abstract.
struct MethodDecl {
  std::string name;
  Visibility visibility = Visibility::Package;
  bool is_abstract = false;
  std::string return_type = "void";
  std::vector<Param> params;
  std::optional<std::vector<Stmt>> body;
  SourceSpan span;
  friend bool operator==(const MethodDecl&, const MethodDecl&) = default;
};

struct ClassDecl {
  std::string name;
  bool is_interface = false;
  bool is_abstract = false;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  SourceSpan span;

  const FieldDecl* find_field(std::string_view name) const;
  const MethodDecl* find_method(std::string_view name) const;
  FieldDecl* find_field(std::string_view name);
  MethodDecl* find_method(std::string_view name);

  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct CompilationUnit {
  std::string package_name;
  std::vector<ClassDecl> classes;
  friend bool operator==(const CompilationUnit&, const CompilationUnit&) = default;
};

using Program = std::vector<CompilationUnit>;

inline constexpr std::string_view kSourceExtension = ".mj";

/// File name a unit is stored under: "<first class name>.mj".
std::string file_name(const CompilationUnit& unit);

const ClassDecl* find_class(const Program& program, std::string_view name);
ClassDecl* find_class(Program& program, std::string_view name);

bool is_primitive_type(std::string_view type_name);

std::string_view to_string(Visibility v);
std::string_view to_string(BinaryOp op);

}  // namespace refdet::syntax
