#include "refdet/resolve.hpp"

#include <algorithm>
#include <set>

#include "refdet/syntax.hpp"

namespace refdet::syntax {

std::string_view to_string(ResolutionErrorKind kind) {
  switch (kind) {
    case ResolutionErrorKind::UnknownType: return "UnknownType";
    case ResolutionErrorKind::UnknownMember: return "UnknownMember";
    case ResolutionErrorKind::DuplicateMember: return "DuplicateMember";
    case ResolutionErrorKind::CyclicInheritance: return "CyclicInheritance";
    case ResolutionErrorKind::AbstractInstantiation: return "AbstractInstantiation";
    case ResolutionErrorKind::ArityMismatch: return "ArityMismatch";
    case ResolutionErrorKind::TypeMismatch: return "TypeMismatch";
    case ResolutionErrorKind::AccessViolation: return "AccessViolation";
    case ResolutionErrorKind::IncompatibleOverride: return "IncompatibleOverride";
    case ResolutionErrorKind::MissingImplementation: return "MissingImplementation";
  }
  return "Unknown";
}

ResolutionError::ResolutionError(ResolutionErrorKind kind, std::string locus,
                                 std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + " at " + locus + ": " +
                         detail),
      kind_(kind),
      locus_(std::move(locus)) {}

// ---------------------------------------------------------------------------
// SymbolTable queries

const ClassDecl* SymbolTable::find_class(std::string_view name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : it->second;
}

std::vector<std::string> SymbolTable::class_names() const {
  std::vector<std::string> out;
  for (const auto& [name, decl] : classes_) out.push_back(name);
  return out;
}

std::optional<std::string> SymbolTable::superclass(std::string_view cls) const {
  const ClassDecl* decl = find_class(cls);
  if (!decl) return std::nullopt;
  return decl->superclass;
}

std::vector<std::string> SymbolTable::ancestors(std::string_view cls) const {
  std::vector<std::string> out;
  auto current = superclass(cls);
  while (current && find_class(*current) &&
         std::find(out.begin(), out.end(), *current) == out.end()) {
    out.push_back(*current);
    current = superclass(*current);
  }
  return out;
}

std::vector<std::string> SymbolTable::direct_subclasses(std::string_view cls) const {
  auto it = subclasses_.find(cls);
  return it == subclasses_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> SymbolTable::descendants(std::string_view cls) const {
  std::vector<std::string> out;
  std::vector<std::string> frontier = direct_subclasses(cls);
  while (!frontier.empty()) {
    std::string next = frontier.front();
    frontier.erase(frontier.begin());
    if (std::find(out.begin(), out.end(), next) != out.end()) continue;
    out.push_back(next);
    for (auto& sub : direct_subclasses(next)) frontier.push_back(sub);
  }
  return out;
}

bool SymbolTable::is_ancestor(std::string_view ancestor, std::string_view cls) const {
  auto chain = ancestors(cls);
  return std::find(chain.begin(), chain.end(), ancestor) != chain.end();
}

bool SymbolTable::related(std::string_view a, std::string_view b) const {
  return a == b || is_ancestor(a, b) || is_ancestor(b, a);
}

bool SymbolTable::is_assignable(std::string_view from, std::string_view to) const {
  if (from == to) return from != "void";
  if (is_primitive_type(from) || is_primitive_type(to)) return false;
  if (from == "void" || to == "void") return false;
  const ClassDecl* target = find_class(to);
  if (!target || !find_class(from)) return false;
  std::vector<std::string> chain{std::string(from)};
  for (auto& a : ancestors(from)) chain.push_back(a);
  for (const auto& c : chain) {
    if (c == to) return true;
    const ClassDecl* decl = find_class(c);
    if (decl && std::find(decl->interfaces.begin(), decl->interfaces.end(), to) !=
                    decl->interfaces.end()) {
      return true;
    }
  }
  return false;
}

std::optional<MemberRef> SymbolTable::lookup_field(std::string_view cls,
                                                   std::string_view name) const {
  std::vector<std::string> chain{std::string(cls)};
  for (auto& a : ancestors(cls)) chain.push_back(a);
  for (const auto& c : chain) {
    const ClassDecl* decl = find_class(c);
    if (decl && decl->find_field(name)) return MemberRef{c, std::string(name)};
  }
  return std::nullopt;
}

std::optional<MemberRef> SymbolTable::lookup_method(std::string_view cls,
                                                    std::string_view name) const {
  std::vector<std::string> chain{std::string(cls)};
  for (auto& a : ancestors(cls)) chain.push_back(a);
  for (const auto& c : chain) {
    const ClassDecl* decl = find_class(c);
    if (decl && decl->find_method(name)) return MemberRef{c, std::string(name)};
  }
  for (const auto& c : chain) {
    const ClassDecl* decl = find_class(c);
    if (!decl) continue;
    for (const auto& iface : decl->interfaces) {
      const ClassDecl* idecl = find_class(iface);
      if (idecl && idecl->find_method(name)) return MemberRef{iface, std::string(name)};
    }
  }
  return std::nullopt;
}

const FieldDecl* SymbolTable::field(const MemberRef& ref) const {
  const ClassDecl* decl = find_class(ref.owner);
  return decl ? decl->find_field(ref.name) : nullptr;
}

const MethodDecl* SymbolTable::method(const MemberRef& ref) const {
  const ClassDecl* decl = find_class(ref.owner);
  return decl ? decl->find_method(ref.name) : nullptr;
}

// ---------------------------------------------------------------------------
// Resolver: type inference shared by strict checking and lenient queries.

class Resolver {
 public:
  Resolver(const SymbolTable& table, bool strict, std::vector<std::string>* log)
      : table_(table), strict_(strict), log_(log) {}

  std::optional<std::string> infer(const Expr& e, const ExprContext& ctx) {
    return std::visit([&](const auto& n) { return infer_node(n, ctx); }, e.node);
  }

  std::optional<MemberRef> field_binding(const Expr& e, const ExprContext& ctx) {
    if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      if (ctx.locals.contains(ref->name)) return std::nullopt;
      return table_.lookup_field(ctx.class_name, ref->name);
    }
    if (const auto* access = std::get_if<FieldAccess>(&e.node)) {
      auto recv = infer(*access->receiver, ctx);
      if (!recv || !table_.find_class(*recv)) return std::nullopt;
      return table_.lookup_field(*recv, access->name);
    }
    return std::nullopt;
  }

  std::optional<MemberRef> method_binding(const Expr& e, const ExprContext& ctx) {
    const auto* call = std::get_if<Call>(&e.node);
    if (!call) return std::nullopt;
    std::string recv_type = ctx.class_name;
    if (call->receiver) {
      auto t = infer(**call->receiver, ctx);
      if (!t || !table_.find_class(*t)) return std::nullopt;
      recv_type = *t;
    }
    return table_.lookup_method(recv_type, call->name);
  }

  static std::string locus(const ExprContext& ctx) {
    std::string out = ctx.class_name;
    if (ctx.method) out += "." + ctx.method->name;
    return out;
  }

  [[noreturn]] void error(ResolutionErrorKind kind, const ExprContext& ctx,
                          const std::string& detail) const {
    throw ResolutionError(kind, locus(ctx), detail);
  }

  std::nullopt_t fail(ResolutionErrorKind kind, const ExprContext& ctx,
                      const std::string& detail) const {
    if (strict_) error(kind, ctx, detail);
    return std::nullopt;
  }

  void record(const ExprContext& ctx, const std::string& what) {
    if (log_) log_->push_back(locus(ctx) + ": " + what);
  }

  void check_access(const MemberRef& ref, Visibility vis, const ExprContext& ctx,
                    std::string_view what) {
    if (vis == Visibility::Private && ref.owner != ctx.class_name) {
      fail(ResolutionErrorKind::AccessViolation, ctx,
           std::string(what) + " " + ref.owner + "." + ref.name + " is private");
    }
  }

  std::optional<std::string> infer_node(const IntLit&, const ExprContext&) {
    return "int";
  }
  std::optional<std::string> infer_node(const BoolLit&, const ExprContext&) {
    return "boolean";
  }
  std::optional<std::string> infer_node(const This&, const ExprContext& ctx) {
    return ctx.class_name;
  }

  std::optional<std::string> infer_node(const NameRef& n, const ExprContext& ctx) {
    if (auto it = ctx.locals.find(n.name); it != ctx.locals.end()) {
      record(ctx, "local " + n.name + " : " + it->second);
      return it->second;
    }
    auto ref = table_.lookup_field(ctx.class_name, n.name);
    if (!ref) {
      return fail(ResolutionErrorKind::UnknownMember, ctx, "unknown name " + n.name);
    }
    const FieldDecl* decl = table_.field(*ref);
    check_access(*ref, decl->visibility, ctx, "field");
    record(ctx, "field " + n.name + " -> " + ref->owner + "." + ref->name);
    return decl->type_name;
  }

  std::optional<std::string> infer_node(const FieldAccess& n, const ExprContext& ctx) {
    auto recv = infer(*n.receiver, ctx);
    if (!recv) return std::nullopt;
    if (!table_.find_class(*recv)) {
      return fail(ResolutionErrorKind::TypeMismatch, ctx,
                  "field access ." + n.name + " on non-class type " + *recv);
    }
    auto ref = table_.lookup_field(*recv, n.name);
    if (!ref) {
      return fail(ResolutionErrorKind::UnknownMember, ctx,
                  "no field " + n.name + " in " + *recv);
    }
    const FieldDecl* decl = table_.field(*ref);
    check_access(*ref, decl->visibility, ctx, "field");
    record(ctx, "field ." + n.name + " -> " + ref->owner + "." + ref->name);
    return decl->type_name;
  }

  std::optional<std::string> infer_node(const Call& n, const ExprContext& ctx) {
    std::string recv_type = ctx.class_name;
    if (n.receiver) {
      auto t = infer(**n.receiver, ctx);
      if (!t) return std::nullopt;
      if (!table_.find_class(*t)) {
        return fail(ResolutionErrorKind::TypeMismatch, ctx,
                    "call ." + n.name + " on non-class type " + *t);
      }
      recv_type = *t;
    }
    auto ref = table_.lookup_method(recv_type, n.name);
    if (!ref) {
      return fail(ResolutionErrorKind::UnknownMember, ctx,
                  "no method " + n.name + " in " + recv_type);
    }
    const MethodDecl* decl = table_.method(*ref);
    check_access(*ref, decl->visibility, ctx, "method");
    if (decl->params.size() != n.args.size()) {
      return fail(ResolutionErrorKind::ArityMismatch, ctx,
                  "call " + n.name + " passes " + std::to_string(n.args.size()) +
                      " arguments, expected " + std::to_string(decl->params.size()));
    }
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      auto arg = infer(n.args[i], ctx);
      if (!arg) return std::nullopt;
      if (!table_.is_assignable(*arg, decl->params[i].type_name)) {
        return fail(ResolutionErrorKind::TypeMismatch, ctx,
                    "argument " + std::to_string(i + 1) + " of " + n.name + " is " +
                        *arg + ", expected " + decl->params[i].type_name);
      }
    }
    record(ctx, "call " + n.name + " -> " + ref->owner + "." + ref->name);
    return decl->return_type;
  }

  std::optional<std::string> infer_node(const New& n, const ExprContext& ctx) {
    const ClassDecl* decl = table_.find_class(n.class_name);
    if (!decl || decl->is_interface) {
      return fail(ResolutionErrorKind::UnknownType, ctx,
                  "cannot instantiate " + n.class_name);
    }
    if (decl->is_abstract) {
      return fail(ResolutionErrorKind::AbstractInstantiation, ctx,
                  n.class_name + " is abstract");
    }
    record(ctx, "new " + n.class_name);
    return n.class_name;
  }

  std::optional<std::string> infer_node(const Binary& n, const ExprContext& ctx) {
    auto lhs = infer(*n.lhs, ctx);
    if (!lhs) return std::nullopt;
    auto rhs = infer(*n.rhs, ctx);
    if (!rhs) return std::nullopt;
    const std::string op(to_string(n.op));
    auto mismatch = [&]() {
      return fail(ResolutionErrorKind::TypeMismatch, ctx,
                  "operator " + op + " applied to " + *lhs + " and " + *rhs);
    };
    switch (n.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
        if (*lhs != "int" || *rhs != "int") return mismatch();
        return "int";
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (*lhs != "int" || *rhs != "int") return mismatch();
        return "boolean";
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (*lhs == "void" || *rhs == "void") return mismatch();
        if (*lhs != *rhs && !table_.is_assignable(*lhs, *rhs) &&
            !table_.is_assignable(*rhs, *lhs)) {
          return mismatch();
        }
        return "boolean";
      case BinaryOp::And:
      case BinaryOp::Or:
        if (*lhs != "boolean" || *rhs != "boolean") return mismatch();
        return "boolean";
    }
    return std::nullopt;
  }

  void expect_assignable(const Expr& value, const std::string& to,
                         const ExprContext& ctx, const std::string& what) {
    auto t = infer(value, ctx);
    if (t && !table_.is_assignable(*t, to)) {
      fail(ResolutionErrorKind::TypeMismatch, ctx,
           what + " has type " + *t + ", expected " + to);
    }
  }

  void check_type_name(const std::string& type, const ExprContext& ctx,
                       bool allow_void) {
    if (is_primitive_type(type) || (allow_void && type == "void")) return;
    if (!table_.find_class(type)) {
      error(ResolutionErrorKind::UnknownType, ctx, "unknown type " + type);
    }
  }

  void check_body(const ClassDecl& cls, const MethodDecl& m) {
    ExprContext ctx{cls.name, &m, {}};
    for (const auto& p : m.params) {
      check_type_name(p.type_name, ctx, false);
      if (!ctx.locals.emplace(p.name, p.type_name).second) {
        error(ResolutionErrorKind::DuplicateMember, ctx, "duplicate parameter " + p.name);
      }
    }
    if (!m.body) return;
    for (const auto& stmt : *m.body) {
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Return>) {
              if (m.return_type == "void") {
                error(ResolutionErrorKind::TypeMismatch, ctx,
                      "return with a value in a void method");
              }
              expect_assignable(s.value, m.return_type, ctx, "return value");
            } else if constexpr (std::is_same_v<T, Assign>) {
              auto target = infer(s.target, ctx);
              if (target) expect_assignable(s.value, *target, ctx, "assigned value");
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
              infer(s.expr, ctx);
            } else if constexpr (std::is_same_v<T, LocalDecl>) {
              check_type_name(s.type_name, ctx, false);
              expect_assignable(s.init, s.type_name, ctx, "initializer of " + s.name);
              if (!ctx.locals.emplace(s.name, s.type_name).second) {
                error(ResolutionErrorKind::DuplicateMember, ctx,
                      "duplicate local " + s.name);
              }
            }
          },
          stmt.node);
    }
  }

 private:
  const SymbolTable& table_;
  bool strict_;
  std::vector<std::string>* log_;
};

std::optional<std::string> SymbolTable::type_of(const Expr& expr,
                                                const ExprContext& ctx) const {
  try {
    return Resolver(*this, false, nullptr).infer(expr, ctx);
  } catch (const ResolutionError&) {
    return std::nullopt;
  }
}

std::optional<MemberRef> SymbolTable::field_binding(const Expr& expr,
                                                    const ExprContext& ctx) const {
  return Resolver(*this, false, nullptr).field_binding(expr, ctx);
}

std::optional<MemberRef> SymbolTable::method_binding(const Expr& expr,
                                                     const ExprContext& ctx) const {
  return Resolver(*this, false, nullptr).method_binding(expr, ctx);
}

std::string SymbolTable::dump() const {
  std::string out;
  for (const auto& [name, decl] : classes_) {
    out += decl->is_interface ? "interface " : "class ";
    out += name;
    if (decl->superclass) out += " extends " + *decl->superclass;
    for (const auto& i : decl->interfaces) out += " implements " + i;
    out += '\n';
  }
  for (const auto& line : bindings_) {
    out += line;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool same_signature(const MethodDecl& a, const MethodDecl& b) {
  if (a.return_type != b.return_type || a.params.size() != b.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].type_name != b.params[i].type_name) return false;
  }
  return true;
}

std::vector<const ClassDecl*> declaration_order(const Program& program) {
  std::vector<const ClassDecl*> out;
  for (const auto& unit : program) {
    for (const auto& decl : unit.classes) out.push_back(&decl);
  }
  return out;
}

}  // namespace

SymbolTable resolve(const Program& units) {
  using K = ResolutionErrorKind;
  SymbolTable table;
  table.program_ = std::make_shared<const Program>(units);
  const auto decls = declaration_order(*table.program_);

  for (const ClassDecl* decl : decls) {
    if (!table.classes_.emplace(decl->name, decl).second) {
      throw ResolutionError(K::DuplicateMember, decl->name,
                            "duplicate type " + decl->name);
    }
  }
  for (const ClassDecl* decl : decls) {
    if (decl->superclass) {
      const ClassDecl* super = table.find_class(*decl->superclass);
      if (!super || super->is_interface) {
        throw ResolutionError(K::UnknownType, decl->name,
                              "unknown superclass " + *decl->superclass);
      }
      table.subclasses_[*decl->superclass].push_back(decl->name);
    }
    for (const auto& iface : decl->interfaces) {
      const ClassDecl* idecl = table.find_class(iface);
      if (!idecl || !idecl->is_interface) {
        throw ResolutionError(K::UnknownType, decl->name, "unknown interface " + iface);
      }
    }
  }
  for (auto& [name, subs] : table.subclasses_) std::sort(subs.begin(), subs.end());

  for (const ClassDecl* decl : decls) {
    std::set<std::string> seen{decl->name};
    auto current = decl->superclass;
    while (current) {
      if (!seen.insert(*current).second) {
        throw ResolutionError(K::CyclicInheritance, decl->name,
                              "inheritance cycle through " + *current);
      }
      current = table.superclass(*current);
    }
  }

  Resolver resolver(table, true, &table.bindings_);
  for (const ClassDecl* decl : decls) {
    ExprContext class_ctx{decl->name, nullptr, {}};
    std::set<std::string> names;
    for (const auto& f : decl->fields) {
      if (!names.insert(f.name).second) {
        throw ResolutionError(K::DuplicateMember, decl->name + "." + f.name,
                              "duplicate field " + f.name);
      }
      resolver.check_type_name(f.type_name, class_ctx, false);
    }
    names.clear();
    for (const auto& m : decl->methods) {
      const std::string locus = decl->name + "." + m.name;
      if (!names.insert(m.name).second) {
        throw ResolutionError(K::DuplicateMember, locus, "duplicate method " + m.name);
      }
      resolver.check_type_name(m.return_type, class_ctx, true);
      if (m.is_abstract && !decl->is_abstract && !decl->is_interface) {
        throw ResolutionError(K::MissingImplementation, locus,
                              "abstract method in concrete class " + decl->name);
      }
      if (decl->is_interface) continue;
      if (decl->superclass) {
        if (auto inherited = table.lookup_method(*decl->superclass, m.name)) {
          if (!same_signature(m, *table.method(*inherited))) {
            throw ResolutionError(K::IncompatibleOverride, locus,
                                  "signature differs from " + inherited->owner +
                                      "." + inherited->name);
          }
        }
      }
      for (const auto& iface : decl->interfaces) {
        const MethodDecl* im = table.find_class(iface)->find_method(m.name);
        if (im && !same_signature(m, *im)) {
          throw ResolutionError(K::IncompatibleOverride, locus,
                                "signature differs from " + iface + "." + m.name);
        }
      }
    }
    if (!decl->is_abstract && !decl->is_interface) {
      // Every method reachable from this class must have a concrete
      // nearest declaration.
      std::vector<std::string> chain{decl->name};
      for (auto& a : table.ancestors(decl->name)) chain.push_back(a);
      std::set<std::string> required;
      for (const auto& c : chain) {
        const ClassDecl* cd = table.find_class(c);
        for (const auto& m : cd->methods) required.insert(m.name);
        for (const auto& iface : cd->interfaces) {
          for (const auto& m : table.find_class(iface)->methods) required.insert(m.name);
        }
      }
      for (const auto& name : required) {
        const MethodDecl* nearest = nullptr;
        for (const auto& c : chain) {
          nearest = table.find_class(c)->find_method(name);
          if (nearest) break;
        }
        if (!nearest || nearest->is_abstract) {
          throw ResolutionError(K::MissingImplementation, decl->name,
                                "no implementation of " + name);
        }
      }
    }
    for (const auto& f : decl->fields) {
      if (f.initializer) {
        resolver.expect_assignable(*f.initializer, f.type_name, class_ctx,
                                   "initializer of " + f.name);
      }
    }
    for (const auto& m : decl->methods) resolver.check_body(*decl, m);
  }
  return table;
}

bool resolves(const Program& units) {
  try {
    resolve(units);
    return true;
  } catch (const ResolutionError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Walkers

namespace {

template <class ExprT, class Fn>
void walk_expr(ExprT& e, const ExprContext& ctx, const Fn& fn) {
  fn(e, ctx);
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FieldAccess>) {
          walk_expr(*n.receiver, ctx, fn);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (n.receiver) walk_expr(**n.receiver, ctx, fn);
          for (auto& arg : n.args) walk_expr(arg, ctx, fn);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk_expr(*n.lhs, ctx, fn);
          walk_expr(*n.rhs, ctx, fn);
        }
      },
      e.node);
}

template <class StmtT, class ExprFn, class StmtFn>
void walk_stmt(StmtT& s, ExprContext& ctx, const ExprFn& on_expr,
               const StmtFn& on_stmt) {
  on_stmt(s, ctx);
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Return>) {
          walk_expr(n.value, ctx, on_expr);
        } else if constexpr (std::is_same_v<T, Assign>) {
          walk_expr(n.target, ctx, on_expr);
          walk_expr(n.value, ctx, on_expr);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          walk_expr(n.expr, ctx, on_expr);
        } else if constexpr (std::is_same_v<T, LocalDecl>) {
          walk_expr(n.init, ctx, on_expr);
          ctx.locals[n.name] = n.type_name;
        }
      },
      s.node);
}

template <class ClassT, class ExprFn, class StmtFn>
void walk_class(ClassT& decl, const ExprFn& on_expr, const StmtFn& on_stmt) {
  for (auto& f : decl.fields) {
    if (f.initializer) {
      ExprContext ctx{decl.name, nullptr, {}};
      walk_expr(*f.initializer, ctx, on_expr);
    }
  }
  for (auto& m : decl.methods) {
    ExprContext ctx{decl.name, &m, {}};
    for (const auto& p : m.params) ctx.locals[p.name] = p.type_name;
    if (!m.body) continue;
    for (auto& s : *m.body) walk_stmt(s, ctx, on_expr, on_stmt);
  }
}

}  // namespace

void for_each_expr(const Program& program, const ExprVisitor& visit) {
  auto no_stmt = [](const Stmt&, const ExprContext&) {};
  for (const auto& unit : program) {
    for (const auto& decl : unit.classes) walk_class(decl, visit, no_stmt);
  }
}

void for_each_expr(const ClassDecl& decl, const MethodDecl& method,
                   const ExprVisitor& visit) {
  ExprContext ctx{decl.name, &method, {}};
  for (const auto& p : method.params) ctx.locals[p.name] = p.type_name;
  if (!method.body) return;
  auto no_stmt = [](const Stmt&, const ExprContext&) {};
  for (const auto& s : *method.body) walk_stmt(s, ctx, visit, no_stmt);
}

void rewrite_program(Program& program, const ExprRewriter& on_expr,
                     const StmtRewriter& on_stmt) {
  auto expr_fn = [&](Expr& e, const ExprContext& ctx) {
    if (on_expr) on_expr(e, ctx);
  };
  auto stmt_fn = [&](Stmt& s, const ExprContext& ctx) {
    if (on_stmt) on_stmt(s, ctx);
  };
  for (auto& unit : program) {
    for (auto& decl : unit.classes) walk_class(decl, expr_fn, stmt_fn);
  }
}

void substitute_type_name(Program& program, std::string_view from,
                          std::string_view to) {
  auto swap = [&](std::string& name) {
    if (name == from) name = std::string(to);
  };
  for (auto& unit : program) {
    for (auto& decl : unit.classes) {
      swap(decl.name);
      if (decl.superclass) swap(*decl.superclass);
      for (auto& i : decl.interfaces) swap(i);
      for (auto& f : decl.fields) swap(f.type_name);
      for (auto& m : decl.methods) {
        swap(m.return_type);
        for (auto& p : m.params) swap(p.type_name);
        if (!m.body) continue;
        for (auto& s : *m.body) {
          if (auto* local = std::get_if<LocalDecl>(&s.node)) swap(local->type_name);
        }
      }
    }
  }
  rewrite_program(program, [&](Expr& e, const ExprContext&) {
    if (auto* n = std::get_if<New>(&e.node)) swap(n->class_name);
  });
}

}  // namespace refdet::syntax
