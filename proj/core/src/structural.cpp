#include "refdet/structural.hpp"

#include <algorithm>
#include <set>

#include "refdet/resolve.hpp"

namespace refdet::structural {

using namespace refdet::syntax;

UnresolvedInput::UnresolvedInput(const std::string& side, const std::string& reason)
    : std::runtime_error(side + " version does not resolve: " + reason) {}

namespace {

struct Member {
  std::string cls;
  const FieldDecl* field = nullptr;
  const MethodDecl* method = nullptr;
  bool used = false;

  bool is_field() const { return field != nullptr; }
  const std::string& name() const { return field ? field->name : method->name; }
};

// The same (class, name) member in both versions with different declarations.
struct Changed {
  std::string cls;
  const FieldDecl* before_field = nullptr;
  const FieldDecl* after_field = nullptr;
  const MethodDecl* before_method = nullptr;
  const MethodDecl* after_method = nullptr;
  bool used = false;
};

bool same_decl(const Member& a, const Member& b) {
  if (a.is_field() != b.is_field()) return false;
  return a.is_field() ? *a.field == *b.field : *a.method == *b.method;
}

// Renames the calls in `m`'s body that bind to (owner, from); `table` is
// the before version's symbol table.
std::vector<Stmt> rename_calls(const SymbolTable& table, const ClassDecl& owner,
                               const MethodDecl& m, const std::string& to) {
  const MemberRef target{owner.name, m.name};
  std::vector<bool> hits;
  for_each_expr(owner, m, [&](const Expr& e, const ExprContext& ctx) {
    hits.push_back(std::holds_alternative<Call>(e.node) && table.method_binding(e, ctx) == target);
  });
  ClassDecl scratch;
  scratch.name = owner.name;
  scratch.methods.push_back(m);
  Program p{CompilationUnit{"", {std::move(scratch)}}};
  std::size_t at = 0;
  rewrite_program(p, [&](Expr& e, const ExprContext&) {
    if (at < hits.size() && hits[at++]) std::get<Call>(e.node).name = to;
  });
  return *p[0].classes[0].methods[0].body;
}

void clear_call_args(std::vector<Stmt>& body, const std::string& name) {
  ClassDecl scratch;
  MethodDecl holder;
  holder.body = body;
  scratch.methods.push_back(std::move(holder));
  Program p{CompilationUnit{"", {std::move(scratch)}}};
  rewrite_program(p, [&](Expr& e, const ExprContext&) {
    if (auto* call = std::get_if<Call>(&e.node); call && call->name == name) call->args.clear();
  });
  body = *p[0].classes[0].methods[0].body;
}

// Positions where `longer` has one extra parameter relative to `shorter`.
std::optional<std::size_t> single_insertion(const std::vector<Param>& shorter,
                                            const std::vector<Param>& longer) {
  if (longer.size() != shorter.size() + 1) return std::nullopt;
  for (std::size_t i = 0; i < longer.size(); ++i) {
    std::vector<Param> rest = longer;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (rest == shorter) return i;
  }
  return std::nullopt;
}

class Matcher {
 public:
  Matcher(Program base, const Program& after)
      : base_(std::move(base)), after_(after),
        before_table_(resolve(base_)), after_table_(resolve(after_)) {
    collect();
  }

  void run(std::vector<Detection>& out) {
    hierarchy_moves(out);
    plain_moves(out);
    member_renames(out);
    parameter_changes(out);
    encapsulations(out);
  }

 private:
  void collect() {
    std::set<std::string> names;
    for (const auto& n : before_table_.class_names()) names.insert(n);
    for (const auto& n : after_table_.class_names()) names.insert(n);
    for (const auto& name : names) {
      const ClassDecl* b = before_table_.find_class(name);
      const ClassDecl* a = after_table_.find_class(name);
      if (b) {
        for (const auto& f : b->fields) {
          const FieldDecl* other = a ? a->find_field(f.name) : nullptr;
          if (!other) {
            removed_.push_back({name, &f, nullptr});
          } else if (!(*other == f)) {
            changed_.push_back({name, &f, other, nullptr, nullptr});
          }
        }
        for (const auto& m : b->methods) {
          const MethodDecl* other = a ? a->find_method(m.name) : nullptr;
          if (!other) {
            removed_.push_back({name, nullptr, &m});
          } else if (!(*other == m)) {
            changed_.push_back({name, nullptr, nullptr, &m, other});
          }
        }
      }
      if (a) {
        for (const auto& f : a->fields) {
          if (!b || !b->find_field(f.name)) added_.push_back({name, &f, nullptr});
        }
        for (const auto& m : a->methods) {
          if (!b || !b->find_method(m.name)) added_.push_back({name, nullptr, &m});
        }
      }
    }
  }

  static std::string noun(bool field) { return field ? "field" : "method"; }

  void hierarchy_moves(std::vector<Detection>& out) {
    // Pull up: removed from a class, identical copy added to its superclass.
    for (auto& r : removed_) {
      if (r.used) continue;
      const auto super = before_table_.superclass(r.cls);
      if (!super) continue;
      for (auto& a : added_) {
        if (a.used || a.cls != *super || a.name() != r.name() || !same_decl(r, a)) continue;
        r.used = a.used = true;
        out.push_back({r.is_field() ? RefactoringKind::PullUpField : RefactoringKind::PullUpMethod,
                       r.name(), {}, {r.cls, r.name()}, {{a.cls, a.name()}},
                       "identical " + noun(r.is_field()) + " left " + r.cls +
                           " and appeared in its superclass " + a.cls});
        break;
      }
    }
    // Push down: removed from a class (or reduced to an abstract stub),
    // identical copies added to direct subclasses.
    auto push_down = [&](const std::string& cls, const Member& original,
                         bool stub) -> std::vector<Member*> {
      std::vector<Member*> copies;
      const auto subs = before_table_.direct_subclasses(cls);
      for (auto& a : added_) {
        if (a.used || a.name() != original.name() || !same_decl(original, a)) continue;
        if (std::find(subs.begin(), subs.end(), a.cls) != subs.end()) copies.push_back(&a);
      }
      if (copies.empty()) return copies;
      Detection d{original.is_field() ? RefactoringKind::PushDownField
                                      : RefactoringKind::PushDownMethod,
                  original.name(), {}, {cls, original.name()}, {}, {}};
      for (Member* c : copies) {
        c->used = true;
        d.targets.push_back({c->cls, c->name()});
      }
      d.rationale = "identical " + noun(original.is_field()) + " moved from " + cls +
                    " into direct subclasses" +
                    (stub ? ", abstract declaration kept" : "");
      out.push_back(std::move(d));
      return copies;
    };
    for (auto& r : removed_) {
      if (!r.used && !push_down(r.cls, r, false).empty()) r.used = true;
    }
    for (auto& c : changed_) {
      if (c.used || !c.before_method) continue;
      MethodDecl stub = *c.before_method;
      stub.is_abstract = true;
      stub.body.reset();
      if (c.before_method->is_abstract || !(*c.after_method == stub)) continue;
      if (!push_down(c.cls, Member{c.cls, nullptr, c.before_method}, true).empty()) {
        c.used = true;
      }
    }
  }

  bool unrelated(const std::string& x, const std::string& y) const {
    auto related_in = [&](const SymbolTable& t) {
      return t.find_class(x) && t.find_class(y) && t.related(x, y);
    };
    return x != y && !related_in(before_table_) && !related_in(after_table_);
  }

  void plain_moves(std::vector<Detection>& out) {
    for (auto& r : removed_) {
      if (r.used) continue;
      for (auto& a : added_) {
        if (a.used || a.name() != r.name() || !same_decl(r, a) || !unrelated(r.cls, a.cls)) {
          continue;
        }
        r.used = a.used = true;
        out.push_back({r.is_field() ? RefactoringKind::MoveField : RefactoringKind::MoveMethod,
                       r.name(), {}, {r.cls, r.name()}, {{a.cls, a.name()}},
                       "identical " + noun(r.is_field()) + " moved between unrelated classes " +
                           r.cls + " and " + a.cls});
        break;
      }
    }
  }

  bool renamed(const Member& r, const Member& a) const {
    if (r.is_field()) {
      FieldDecl f = *r.field;
      f.name = a.field->name;
      return f == *a.field;
    }
    MethodDecl m = *r.method;
    m.name = a.method->name;
    if (m.body) {
      m.body = rename_calls(before_table_, *before_table_.find_class(r.cls), *r.method,
                            a.method->name);
    }
    return m == *a.method;
  }

  void member_renames(std::vector<Detection>& out) {
    for (auto& r : removed_) {
      if (r.used) continue;
      for (auto& a : added_) {
        if (a.used || a.cls != r.cls || a.is_field() != r.is_field() || !renamed(r, a)) continue;
        r.used = a.used = true;
        out.push_back({r.is_field() ? RefactoringKind::RenameField : RefactoringKind::RenameMethod,
                       r.name(), a.name(), {r.cls, r.name()}, {{a.cls, a.name()}},
                       "declaration equal up to the new name"});
        break;
      }
    }
  }

  void parameter_changes(std::vector<Detection>& out) {
    for (auto& c : changed_) {
      if (c.used || !c.before_method) continue;
      const MethodDecl& b = *c.before_method;
      const MethodDecl& a = *c.after_method;
      if (b.return_type != a.return_type || b.is_abstract != a.is_abstract ||
          b.visibility != a.visibility) {
        continue;
      }
      auto bb = b.body;
      auto ab = a.body;
      if (bb) clear_call_args(*bb, b.name);
      if (ab) clear_call_args(*ab, a.name);
      if (bb != ab) continue;
      if (auto i = single_insertion(b.params, a.params)) {
        c.used = true;
        out.push_back({RefactoringKind::AddMethodParameter, b.name, a.params[*i].name,
                       {c.cls, b.name}, {{c.cls, a.name}}, "one parameter added, body unchanged"});
      } else if (auto j = single_insertion(a.params, b.params)) {
        c.used = true;
        out.push_back({RefactoringKind::RemoveMethodParameter, b.name, b.params[*j].name,
                       {c.cls, b.name}, {{c.cls, a.name}},
                       "one parameter removed, body unchanged"});
      }
    }
  }

  static bool reads_field(const MethodDecl& m, const FieldDecl& f) {
    if (!m.params.empty() || m.return_type != f.type_name || !m.body || m.body->size() != 1) {
      return false;
    }
    const auto* ret = std::get_if<Return>(&m.body->front().node);
    if (!ret) return false;
    return ret->value == Expr(NameRef{f.name}) || ret->value == Expr(FieldAccess{This{}, f.name});
  }

  static bool writes_field(const MethodDecl& m, const FieldDecl& f) {
    if (m.params.size() != 1 || m.params[0].type_name != f.type_name ||
        m.return_type != "void" || !m.body || m.body->size() != 1) {
      return false;
    }
    const auto* assign = std::get_if<Assign>(&m.body->front().node);
    if (!assign || assign->value != Expr(NameRef{m.params[0].name})) return false;
    if (assign->target == Expr(FieldAccess{This{}, f.name})) return true;
    return m.params[0].name != f.name && assign->target == Expr(NameRef{f.name});
  }

  void encapsulations(std::vector<Detection>& out) {
    for (auto& c : changed_) {
      if (c.used || !c.before_field) continue;
      const FieldDecl& b = *c.before_field;
      const FieldDecl& a = *c.after_field;
      if (b.visibility == Visibility::Private || a.visibility != Visibility::Private) continue;
      if (b.type_name != a.type_name || b.initializer != a.initializer) continue;
      Member* getter = nullptr;
      Member* setter = nullptr;
      for (auto& m : added_) {
        if (m.used || m.cls != c.cls || m.is_field()) continue;
        if (!getter && reads_field(*m.method, a)) getter = &m;
        else if (!setter && writes_field(*m.method, a)) setter = &m;
      }
      if (!getter || !setter) continue;
      c.used = getter->used = setter->used = true;
      out.push_back({RefactoringKind::EncapsulateField, b.name, {}, {c.cls, b.name},
                     {{c.cls, getter->name()}, {c.cls, setter->name()}},
                     "field made private; added accessors read and write exactly it"});
    }
  }

  Program base_;
  const Program& after_;
  SymbolTable before_table_;
  SymbolTable after_table_;
  std::vector<Member> removed_;
  std::vector<Member> added_;
  std::vector<Changed> changed_;
};

std::vector<std::string> class_list(const Program& program) {
  std::vector<std::string> out;
  for (const auto& unit : program) {
    for (const auto& c : unit.classes) out.push_back(c.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Fields and methods of a class, each sorted by name, for order-insensitive comparison.
std::pair<std::vector<FieldDecl>, std::vector<MethodDecl>> inventory(const ClassDecl& c) {
  auto fields = c.fields;
  auto methods = c.methods;
  std::sort(fields.begin(), fields.end(),
            [](const auto& x, const auto& y) { return x.name < y.name; });
  std::sort(methods.begin(), methods.end(),
            [](const auto& x, const auto& y) { return x.name < y.name; });
  return {std::move(fields), std::move(methods)};
}

bool same_shape(const ClassDecl& x, const ClassDecl& y) {
  return x.is_interface == y.is_interface && x.is_abstract == y.is_abstract &&
         x.superclass == y.superclass && x.interfaces == y.interfaces &&
         inventory(x) == inventory(y);
}

}  // namespace

std::vector<Detection> detect(const Program& before, const Program& after) {
  try {
    resolve(before);
  } catch (const ResolutionError& e) {
    throw UnresolvedInput("before", e.what());
  }
  try {
    resolve(after);
  } catch (const ResolutionError& e) {
    throw UnresolvedInput("after", e.what());
  }
  std::vector<Detection> out;
  if (before == after) return out;

  // Class renames: substitute each candidate name and compare the class shape.
  Program base = before;
  const auto before_names = class_list(before);
  const auto after_names = class_list(after);
  std::vector<std::string> gone;
  std::vector<std::string> fresh;
  std::set_difference(before_names.begin(), before_names.end(), after_names.begin(),
                      after_names.end(), std::back_inserter(gone));
  std::set_difference(after_names.begin(), after_names.end(), before_names.begin(),
                      before_names.end(), std::back_inserter(fresh));
  for (const auto& x : gone) {
    for (auto it = fresh.begin(); it != fresh.end(); ++it) {
      Program trial = base;
      substitute_type_name(trial, x, *it);
      if (!same_shape(*find_class(trial, *it), *find_class(after, *it))) continue;
      out.push_back({RefactoringKind::RenameClass, x, *it, {x, {}}, {{*it, {}}},
                     "class members equal up to the type-name substitution"});
      base = std::move(trial);
      fresh.erase(it);
      break;
    }
  }

  Matcher(std::move(base), after).run(out);
  return out;
}

namespace {

std::string join_names(const std::vector<Locus>& loci) {
  std::string out;
  for (std::size_t i = 0; i < loci.size(); ++i) {
    if (i > 0) out += i + 1 == loci.size() ? " and " : ", ";
    out += loci[i].class_name;
  }
  return out;
}

std::string target_class(const Detection& d) {
  return d.targets.empty() ? std::string("?") : d.targets.front().class_name;
}

}  // namespace

std::string explain(const Detection& d) {
  const std::string& cls = d.source.class_name;
  switch (d.kind) {
    case RefactoringKind::RenameClass:
      return "Class " + d.element + " was renamed to " + d.new_name + ".";
    case RefactoringKind::RenameMethod:
      return "Method " + d.element + " in class " + cls + " was renamed to " + d.new_name + ".";
    case RefactoringKind::RenameField:
      return "Field " + d.element + " in class " + cls + " was renamed to " + d.new_name + ".";
    case RefactoringKind::PullUpField:
      return "Field " + d.element + " was moved from " + cls + " to its superclass " +
             target_class(d) + ".";
    case RefactoringKind::PullUpMethod:
      return "Method " + d.element + " was moved from " + cls + " to its superclass " +
             target_class(d) + ".";
    case RefactoringKind::PushDownField:
    case RefactoringKind::PushDownMethod:
      return std::string(d.kind == RefactoringKind::PushDownField ? "Field " : "Method ") +
             d.element + " was moved from " + cls + " to its " +
             (d.targets.size() == 1 ? "subclass " : "subclasses ") + join_names(d.targets) +
             ".";
    case RefactoringKind::MoveMethod:
      return "Method " + d.element + " was moved from " + cls + " to " + target_class(d) + ".";
    case RefactoringKind::MoveField:
      return "Field " + d.element + " was moved from " + cls + " to " + target_class(d) + ".";
    case RefactoringKind::AddMethodParameter:
      return "Parameter " + d.new_name + " was added to method " + d.element + " in class " +
             cls + ".";
    case RefactoringKind::RemoveMethodParameter:
      return "Parameter " + d.new_name + " was removed from method " + d.element +
             " in class " + cls + ".";
    case RefactoringKind::EncapsulateField: {
      std::string accessors;
      for (std::size_t i = 0; i < d.targets.size(); ++i) {
        if (i > 0) accessors += " and ";
        accessors += d.targets[i].member;
      }
      return "Field " + d.element + " in class " + cls + " was made private behind " +
             accessors + ".";
    }
    default:
      return std::string(display_name(d.kind)) + " was applied to " + d.element + " in " +
             cls + ".";
  }
}

}  // namespace refdet::structural
