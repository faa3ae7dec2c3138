#include <algorithm>
#include <cstdio>
#include <set>

#include "refdet/generate.hpp"
#include "refdet/resolve.hpp"

namespace refdet::gen {

using namespace refdet::syntax;

InvalidKind::InvalidKind(RefactoringKind kind)
    : std::invalid_argument("refactoring kind is not generated: " +
                            std::string(display_name(kind))) {}

namespace {

std::set<std::string> all_identifiers(const Program& program) {
  std::set<std::string> names;
  for (const auto& unit : program) {
    for (const auto& c : unit.classes) {
      names.insert(c.name);
      for (const auto& f : c.fields) names.insert(f.name);
      for (const auto& m : c.methods) {
        names.insert(m.name);
        for (const auto& p : m.params) names.insert(p.name);
        if (!m.body) continue;
        for (const auto& s : *m.body) {
          if (const auto* local = std::get_if<LocalDecl>(&s.node)) {
            names.insert(local->name);
          }
        }
      }
    }
  }
  return names;
}

// original + "R" + two-digit counter, unused anywhere in the program.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (int counter = 1; counter < 100; ++counter) {
    char suffix[8];
    std::snprintf(suffix, sizeof suffix, "R%02d", counter);
    std::string candidate = base + suffix;
    if (!taken.contains(candidate)) return candidate;
  }
  return base + "R99x";
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::vector<const ClassDecl*> classes_of(const Program& program) {
  std::vector<const ClassDecl*> out;
  for (const auto& unit : program) {
    for (const auto& c : unit.classes) {
      if (!c.is_interface) out.push_back(&c);
    }
  }
  return out;
}

// True when an ancestor or descendant of `cls` declares a method `name`.
bool in_override_family(const SymbolTable& table, const std::string& cls,
                        const std::string& name) {
  auto related = table.ancestors(cls);
  for (auto& d : table.descendants(cls)) related.push_back(d);
  for (const auto& r : related) {
    if (table.find_class(r)->find_method(name)) return true;
  }
  const ClassDecl* decl = table.find_class(cls);
  for (const auto& iface : decl->interfaces) {
    if (table.find_class(iface)->find_method(name)) return true;
  }
  return false;
}

template <class T>
const T& choose(std::vector<T>& items, RandomStream& rng) {
  return items[rng.below(items.size())];
}

TransformationCase make_case(const Program& before, Program after, RefactoringKind kind,
                             CaseSubject subject, bool hard = false) {
  TransformationCase c;
  c.kind = kind;
  c.hard = hard;
  c.before = before;
  c.after = std::move(after);
  c.subject = std::move(subject);
  return c;
}

ApplyResult rename_class(const Program& program, RandomStream& rng) {
  auto classes = classes_of(program);
  if (classes.empty()) return NotApplicable{"no class to rename"};
  const ClassDecl* target = choose(classes, rng);
  const std::string new_name = fresh_name(target->name, all_identifiers(program));
  Program after = program;
  substitute_type_name(after, target->name, new_name);
  return make_case(program, std::move(after), RefactoringKind::RenameClass,
                   {.source_class = target->name, .member = {}, .new_name = new_name,
                    .target_classes = {}, .added_members = {}});
}

ApplyResult rename_method(const Program& program, const SymbolTable& table,
                          RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* c : classes_of(program)) {
    for (const auto& m : c->methods) {
      if (!in_override_family(table, c->name, m.name)) {
        candidates.push_back({c->name, m.name});
      }
    }
  }
  if (candidates.empty()) return NotApplicable{"every method belongs to an override family"};
  const MemberRef target = choose(candidates, rng);
  const std::string new_name = fresh_name(target.name, all_identifiers(program));
  Program after = program;
  rewrite_program(after, [&](Expr& e, const ExprContext& ctx) {
    if (auto* call = std::get_if<Call>(&e.node)) {
      if (table.method_binding(e, ctx) == target) call->name = new_name;
    }
  });
  find_class(after, target.owner)->find_method(target.name)->name = new_name;
  return make_case(program, std::move(after), RefactoringKind::RenameMethod,
                   {.source_class = target.owner, .member = target.name,
                    .new_name = new_name, .target_classes = {}, .added_members = {}});
}

ApplyResult rename_field(const Program& program, const SymbolTable& table,
                         RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* c : classes_of(program)) {
    for (const auto& f : c->fields) candidates.push_back({c->name, f.name});
  }
  if (candidates.empty()) return NotApplicable{"no field to rename"};
  const MemberRef target = choose(candidates, rng);
  const std::string new_name = fresh_name(target.name, all_identifiers(program));
  Program after = program;
  rewrite_program(after, [&](Expr& e, const ExprContext& ctx) {
    if (table.field_binding(e, ctx) != target) return;
    if (auto* ref = std::get_if<NameRef>(&e.node)) ref->name = new_name;
    if (auto* access = std::get_if<FieldAccess>(&e.node)) access->name = new_name;
  });
  find_class(after, target.owner)->find_field(target.name)->name = new_name;
  return make_case(program, std::move(after), RefactoringKind::RenameField,
                   {.source_class = target.owner, .member = target.name,
                    .new_name = new_name, .target_classes = {}, .added_members = {}});
}

ApplyResult add_parameter(const Program& program, const SymbolTable& table,
                          RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* c : classes_of(program)) {
    for (const auto& m : c->methods) {
      if (!m.is_abstract && !in_override_family(table, c->name, m.name)) {
        candidates.push_back({c->name, m.name});
      }
    }
  }
  if (candidates.empty()) return NotApplicable{"no method outside an override family"};
  const MemberRef target = choose(candidates, rng);
  const auto taken = all_identifiers(program);
  std::string param;
  for (int n = 1;; ++n) {
    param = "p" + std::to_string(n);
    if (!taken.contains(param)) break;
  }
  Program after = program;
  rewrite_program(after, [&](Expr& e, const ExprContext& ctx) {
    if (auto* call = std::get_if<Call>(&e.node)) {
      if (table.method_binding(e, ctx) == target) call->args.push_back(IntLit{0});
    }
  });
  find_class(after, target.owner)->find_method(target.name)->params.push_back({param, "int"});
  return make_case(program, std::move(after), RefactoringKind::AddMethodParameter,
                   {.source_class = target.owner, .member = target.name,
                    .new_name = param, .target_classes = {}, .added_members = {}});
}

ApplyResult encapsulate_field(const Program& program, const SymbolTable& table,
                              RandomStream& rng) {
  struct Candidate {
    MemberRef field;
    std::string getter;
    std::string setter;
  };
  std::vector<Candidate> candidates;
  for (const ClassDecl* c : classes_of(program)) {
    for (const auto& f : c->fields) {
      if (f.visibility == Visibility::Private) continue;
      const std::string getter =
          (f.type_name == "boolean" ? "is" : "get") + capitalize(f.name);
      const std::string setter = "set" + capitalize(f.name);
      if (c->find_method(getter) || c->find_method(setter) ||
          in_override_family(table, c->name, getter) ||
          in_override_family(table, c->name, setter)) {
        continue;
      }
      candidates.push_back({{c->name, f.name}, getter, setter});
    }
  }
  if (candidates.empty()) return NotApplicable{"no non-private field"};
  const Candidate target = choose(candidates, rng);
  const FieldDecl& field = *table.field(target.field);

  Program after = program;
  rewrite_program(
      after,
      [&](Expr& e, const ExprContext& ctx) {
        if (ctx.class_name == target.field.owner) return;
        if (table.field_binding(e, ctx) != target.field) return;
        std::optional<Box<Expr>> receiver;
        if (auto* access = std::get_if<FieldAccess>(&e.node)) receiver = access->receiver;
        e = Call{std::move(receiver), target.getter, {}};
      },
      [&](Stmt& s, const ExprContext& ctx) {
        if (ctx.class_name == target.field.owner) return;
        auto* assign = std::get_if<Assign>(&s.node);
        if (!assign || table.field_binding(assign->target, ctx) != target.field) return;
        std::optional<Box<Expr>> receiver;
        if (auto* access = std::get_if<FieldAccess>(&assign->target.node)) {
          receiver = access->receiver;
        }
        Expr value = assign->value;
        s = ExprStmt{Call{std::move(receiver), target.setter, {std::move(value)}}};
      });

  ClassDecl& owner = *find_class(after, target.field.owner);
  owner.find_field(field.name)->visibility = Visibility::Private;
  MethodDecl getter;
  getter.name = target.getter;
  getter.visibility = Visibility::Public;
  getter.return_type = field.type_name;
  getter.body = std::vector<Stmt>{Return{NameRef{field.name}}};
  MethodDecl setter;
  setter.name = target.setter;
  setter.visibility = Visibility::Public;
  setter.return_type = "void";
  setter.params = {{field.name, field.type_name}};
  setter.body = std::vector<Stmt>{
      Assign{FieldAccess{This{}, field.name}, NameRef{field.name}}};
  owner.methods.push_back(std::move(getter));
  owner.methods.push_back(std::move(setter));
  return make_case(program, std::move(after), RefactoringKind::EncapsulateField,
                   {.source_class = target.field.owner, .member = field.name,
                    .new_name = {}, .target_classes = {},
                    .added_members = {target.getter, target.setter}});
}

// The method body uses nothing of its own class.
bool self_contained(const ClassDecl& cls, const MethodDecl& m, const SymbolTable& table) {
  bool uses_self = false;
  for_each_expr(cls, m, [&](const Expr& e, const ExprContext& ctx) {
    if (std::holds_alternative<This>(e.node)) uses_self = true;
    if (const auto* call = std::get_if<Call>(&e.node); call && !call->receiver) {
      uses_self = true;
    }
    if (std::holds_alternative<NameRef>(e.node) && table.field_binding(e, ctx)) {
      uses_self = true;
    }
  });
  return !uses_self;
}

// An expression of static type `type` (or a subtype) usable at `ctx`.
std::optional<Expr> receiver_of_type(const SymbolTable& table, const ExprContext& ctx,
                                     const std::string& type) {
  for (const auto& [name, t] : ctx.locals) {
    if (table.is_assignable(t, type)) return Expr(NameRef{name});
  }
  std::vector<std::string> chain{ctx.class_name};
  for (auto& a : table.ancestors(ctx.class_name)) chain.push_back(a);
  for (const auto& c : chain) {
    for (const auto& f : table.find_class(c)->fields) {
      if (!table.is_assignable(f.type_name, type)) continue;
      if (f.visibility == Visibility::Private && c != ctx.class_name) continue;
      auto nearest = table.lookup_field(ctx.class_name, f.name);
      if (ctx.locals.contains(f.name)) continue;
      if (nearest && nearest->owner == c) return Expr(NameRef{f.name});
    }
  }
  return std::nullopt;
}

ApplyResult move_method(const Program& program, const SymbolTable& table,
                        RandomStream& rng) {
  struct Candidate {
    MemberRef method;
    std::string target;
  };
  std::vector<Candidate> candidates;
  const auto classes = classes_of(program);
  for (const ClassDecl* x : classes) {
    for (const auto& m : x->methods) {
      if (m.is_abstract || in_override_family(table, x->name, m.name)) continue;
      if (!self_contained(*x, m, table)) continue;
      for (const ClassDecl* y : classes) {
        if (table.related(x->name, y->name)) continue;
        if (y->find_method(m.name) || in_override_family(table, y->name, m.name)) continue;
        candidates.push_back({{x->name, m.name}, y->name});
      }
    }
  }
  if (candidates.empty()) return NotApplicable{"no self-contained method with an unrelated target"};
  const Candidate target = choose(candidates, rng);

  Program after = program;
  bool unreachable = false;
  rewrite_program(after, [&](Expr& e, const ExprContext& ctx) {
    auto* call = std::get_if<Call>(&e.node);
    if (!call || table.method_binding(e, ctx) != target.method) return;
    if (ctx.class_name == target.target || table.is_ancestor(target.target, ctx.class_name)) {
      call->receiver.reset();
      return;
    }
    auto receiver = receiver_of_type(table, ctx, target.target);
    if (!receiver) {
      unreachable = true;
      return;
    }
    call->receiver = Box<Expr>(std::move(*receiver));
  });
  if (unreachable) return NotApplicable{"a call site has no receiver of the target type"};
  ClassDecl& source = *find_class(after, target.method.owner);
  auto it = std::find_if(source.methods.begin(), source.methods.end(),
                         [&](const auto& m) { return m.name == target.method.name; });
  MethodDecl moved = *it;
  source.methods.erase(it);
  find_class(after, target.target)->methods.push_back(std::move(moved));
  return make_case(program, std::move(after), RefactoringKind::MoveMethod,
                   {.source_class = target.method.owner, .member = target.method.name,
                    .new_name = {}, .target_classes = {target.target},
                    .added_members = {}});
}

ApplyResult pull_up_field(const Program& program, const SymbolTable& table,
                          RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* y : classes_of(program)) {
    if (!y->superclass) continue;
    for (const auto& f : y->fields) {
      if (f.visibility == Visibility::Private) continue;
      // A same-named field anywhere above would make the move ambiguous.
      if (table.lookup_field(*y->superclass, f.name)) continue;
      candidates.push_back({y->name, f.name});
    }
  }
  if (candidates.empty()) return NotApplicable{"no subclass field that can move up"};
  const MemberRef target = choose(candidates, rng);
  const std::string super = *table.superclass(target.owner);
  Program after = program;
  ClassDecl& sub = *find_class(after, target.owner);
  auto it = std::find_if(sub.fields.begin(), sub.fields.end(),
                         [&](const auto& f) { return f.name == target.name; });
  FieldDecl moved = *it;
  sub.fields.erase(it);
  find_class(after, super)->fields.push_back(std::move(moved));
  return make_case(program, std::move(after), RefactoringKind::PullUpField,
                   {.source_class = target.owner, .member = target.name, .new_name = {},
                    .target_classes = {super}, .added_members = {}});
}

ApplyResult pull_up_method(const Program& program, const SymbolTable& table,
                           RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* y : classes_of(program)) {
    if (!y->superclass) continue;
    for (const auto& m : y->methods) {
      if (m.is_abstract || m.visibility == Visibility::Private) continue;
      if (table.lookup_method(*y->superclass, m.name)) continue;
      candidates.push_back({y->name, m.name});
    }
  }
  if (candidates.empty()) return NotApplicable{"no subclass method that can move up"};
  const MemberRef target = choose(candidates, rng);
  const std::string super = *table.superclass(target.owner);
  Program after = program;
  ClassDecl& sub = *find_class(after, target.owner);
  auto it = std::find_if(sub.methods.begin(), sub.methods.end(),
                         [&](const auto& m) { return m.name == target.name; });
  MethodDecl moved = *it;
  sub.methods.erase(it);
  find_class(after, super)->methods.push_back(std::move(moved));
  return make_case(program, std::move(after), RefactoringKind::PullUpMethod,
                   {.source_class = target.owner, .member = target.name, .new_name = {},
                    .target_classes = {super}, .added_members = {}});
}

ApplyResult push_down_field(const Program& program, const SymbolTable& table,
                            RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* z : classes_of(program)) {
    const auto subs = table.direct_subclasses(z->name);
    if (subs.empty()) continue;
    for (const auto& f : z->fields) {
      const bool clash = std::any_of(subs.begin(), subs.end(), [&](const auto& s) {
        return table.find_class(s)->find_field(f.name) != nullptr;
      });
      if (!clash) candidates.push_back({z->name, f.name});
    }
  }
  if (candidates.empty()) return NotApplicable{"no superclass field that can move down"};
  const MemberRef target = choose(candidates, rng);
  const auto subs = table.direct_subclasses(target.owner);
  Program after = program;
  ClassDecl& super = *find_class(after, target.owner);
  auto it = std::find_if(super.fields.begin(), super.fields.end(),
                         [&](const auto& f) { return f.name == target.name; });
  FieldDecl moved = *it;
  super.fields.erase(it);
  for (const auto& s : subs) find_class(after, s)->fields.push_back(moved);
  return make_case(program, std::move(after), RefactoringKind::PushDownField,
                   {.source_class = target.owner, .member = target.name, .new_name = {},
                    .target_classes = subs, .added_members = {}});
}

ApplyResult push_down_method(const Program& program, const SymbolTable& table,
                             RandomStream& rng) {
  std::vector<MemberRef> candidates;
  for (const ClassDecl* z : classes_of(program)) {
    const auto subs = table.direct_subclasses(z->name);
    if (subs.empty()) continue;
    for (const auto& m : z->methods) {
      if (m.is_abstract) continue;
      if (z->superclass && table.lookup_method(*z->superclass, m.name)) continue;
      const bool clash = std::any_of(subs.begin(), subs.end(), [&](const auto& s) {
        return table.find_class(s)->find_method(m.name) != nullptr;
      });
      if (!clash) candidates.push_back({z->name, m.name});
    }
  }
  if (candidates.empty()) return NotApplicable{"no superclass method that can move down"};
  const MemberRef target = choose(candidates, rng);
  const auto subs = table.direct_subclasses(target.owner);
  Program after = program;
  ClassDecl& super = *find_class(after, target.owner);
  auto it = std::find_if(super.methods.begin(), super.methods.end(),
                         [&](const auto& m) { return m.name == target.name; });
  const MethodDecl moved = *it;
  // An abstract superclass keeps an abstract declaration half of the time.
  const bool keep_stub = super.is_abstract && moved.visibility != Visibility::Private &&
                         rng.chance(0.5);
  if (keep_stub) {
    it->is_abstract = true;
    it->body.reset();
  } else {
    super.methods.erase(it);
  }
  for (const auto& s : subs) find_class(after, s)->methods.push_back(moved);
  return make_case(program, std::move(after), RefactoringKind::PushDownMethod,
                   {.source_class = target.owner, .member = target.name, .new_name = {},
                    .target_classes = subs, .added_members = {}},
                   keep_stub);
}

}  // namespace

ApplyResult apply_refactoring(const Program& program, RefactoringKind kind,
                              RandomStream& stream) {
  if (!is_generated_kind(kind)) throw InvalidKind(kind);
  const SymbolTable table = resolve(program);
  switch (kind) {
    case RefactoringKind::RenameClass: return rename_class(program, stream);
    case RefactoringKind::RenameMethod: return rename_method(program, table, stream);
    case RefactoringKind::RenameField: return rename_field(program, table, stream);
    case RefactoringKind::AddMethodParameter: return add_parameter(program, table, stream);
    case RefactoringKind::EncapsulateField: return encapsulate_field(program, table, stream);
    case RefactoringKind::MoveMethod: return move_method(program, table, stream);
    case RefactoringKind::PullUpField: return pull_up_field(program, table, stream);
    case RefactoringKind::PullUpMethod: return pull_up_method(program, table, stream);
    case RefactoringKind::PushDownField: return push_down_field(program, table, stream);
    case RefactoringKind::PushDownMethod: return push_down_method(program, table, stream);
    default: break;
  }
  throw InvalidKind(kind);
}

}  // namespace refdet::gen
