#include <algorithm>
#include <regex>

#include "refdet/generate.hpp"
#include "refdet/resolve.hpp"
#include "refdet/syntax.hpp"

// The audit re-derives each transformation from plain syntax: it undoes the
// edit on the after-program without consulting bindings and requires the
// result to equal the before-program.

namespace refdet::gen {

using namespace refdet::syntax;

namespace {

using Failure = std::optional<std::string>;

std::string print_program(const Program& program) {
  std::string out;
  for (const auto& unit : program) out += print(unit);
  return out;
}

std::string replace_word(const std::string& text, const std::string& from,
                         const std::string& to) {
  return std::regex_replace(text, std::regex("\\b" + from + "\\b"), to);
}

bool mentions(const Program& program, const std::string& word) {
  return std::regex_search(print_program(program), std::regex("\\b" + word + "\\b"));
}

std::optional<std::string> parent_of(const Program& program, const std::string& cls) {
  const ClassDecl* decl = find_class(program, cls);
  return decl ? decl->superclass : std::nullopt;
}

std::vector<std::string> children_of(const Program& program, const std::string& cls) {
  std::vector<std::string> out;
  for (const auto& unit : program) {
    for (const auto& c : unit.classes) {
      if (c.superclass == cls) out.push_back(c.name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class Member>
std::optional<Member> take(std::vector<Member>& members, const std::string& name) {
  auto it = std::find_if(members.begin(), members.end(),
                         [&](const Member& m) { return m.name == name; });
  if (it == members.end()) return std::nullopt;
  Member out = std::move(*it);
  members.erase(it);
  return out;
}

Failure equal_or(const Program& undone, const Program& before, const char* what) {
  if (undone == before) return std::nullopt;
  return std::string(what);
}

// A rename is undone by substituting the fresh word back; fresh names occur
// nowhere in the before-program, so the substitution is exact.
Failure audit_rename(const TransformationCase& c, bool is_class) {
  const auto& s = c.subject;
  if (s.new_name.empty() || s.new_name == (is_class ? s.source_class : s.member)) {
    return "rename has no new name";
  }
  if (mentions(c.before, s.new_name)) return "new name already used before the rename";
  const std::string old_name = is_class ? s.source_class : s.member;
  if (replace_word(print_program(c.after), s.new_name, old_name) != print_program(c.before)) {
    return "after-program differs from the before-program beyond the renamed word";
  }
  if (is_class) {
    if (!find_class(c.after, s.new_name) || find_class(c.after, s.source_class)) {
      return "renamed class not found under its new name";
    }
    return std::nullopt;
  }
  const ClassDecl* owner = find_class(c.after, s.source_class);
  if (!owner) return "owner class missing";
  const bool field = c.kind == RefactoringKind::RenameField;
  const bool found = field ? owner->find_field(s.new_name) != nullptr
                           : owner->find_method(s.new_name) != nullptr;
  if (!found) return "renamed member is not declared in its class";
  return std::nullopt;
}

Failure audit_add_parameter(const TransformationCase& c) {
  const auto& s = c.subject;
  Program undone = c.after;
  MethodDecl* m = find_class(undone, s.source_class)
                      ? find_class(undone, s.source_class)->find_method(s.member)
                      : nullptr;
  if (!m || m->params.empty()) return "method missing or without parameters";
  if (m->params.back().name != s.new_name || m->params.back().type_name != "int") {
    return "last parameter is not the new int parameter";
  }
  m->params.pop_back();
  const std::size_t arity = m->params.size();
  rewrite_program(undone, [&](Expr& e, const ExprContext&) {
    auto* call = std::get_if<Call>(&e.node);
    if (!call || call->name != s.member || call->args.size() != arity + 1) return;
    if (call->args.back() == Expr(IntLit{0})) call->args.pop_back();
  });
  return equal_or(undone, c.before, "calls differ beyond the added argument");
}

Failure audit_encapsulate(const TransformationCase& c) {
  const auto& s = c.subject;
  if (s.added_members.size() != 2) return "accessors not recorded";
  const std::string& getter_name = s.added_members[0];
  const std::string& setter_name = s.added_members[1];
  Program undone = c.after;
  ClassDecl* owner = find_class(undone, s.source_class);
  if (!owner) return "owner class missing";
  FieldDecl* field = owner->find_field(s.member);
  if (!field || field->visibility != Visibility::Private) return "field is not private";
  const FieldDecl* original = find_class(c.before, s.source_class)->find_field(s.member);
  if (!original || original->visibility == Visibility::Private) {
    return "field was already private";
  }
  auto getter = take(owner->methods, getter_name);
  auto setter = take(owner->methods, setter_name);
  if (!getter || !setter) return "accessors missing";
  const std::vector<Stmt> getter_body{Return{NameRef{s.member}}};
  if (!getter->params.empty() || getter->return_type != field->type_name ||
      getter->body != getter_body || getter->visibility != Visibility::Public) {
    return "getter does not return exactly the field";
  }
  if (setter->params.size() != 1 || setter->params[0].type_name != field->type_name ||
      setter->return_type != "void" || setter->visibility != Visibility::Public ||
      setter->body != std::vector<Stmt>{Assign{FieldAccess{This{}, s.member},
                                               NameRef{setter->params[0].name}}}) {
    return "setter does not assign exactly the field";
  }
  field->visibility = original->visibility;
  rewrite_program(
      undone,
      [&](Expr& e, const ExprContext&) {
        auto* call = std::get_if<Call>(&e.node);
        if (!call || call->name != getter_name || !call->args.empty()) return;
        if (call->receiver) {
          e = FieldAccess{*call->receiver, s.member};
        } else {
          e = NameRef{s.member};
        }
      },
      [&](Stmt& st, const ExprContext&) {
        auto* stmt = std::get_if<ExprStmt>(&st.node);
        if (!stmt) return;
        auto* call = std::get_if<Call>(&stmt->expr.node);
        if (!call || call->name != setter_name || call->args.size() != 1) return;
        Expr target = call->receiver ? Expr(FieldAccess{*call->receiver, s.member})
                                     : Expr(NameRef{s.member});
        Expr value = call->args[0];
        st = Assign{std::move(target), std::move(value)};
      });
  return equal_or(undone, c.before, "accesses differ beyond getter/setter calls");
}

// Calls to `name` lose their receivers so that retargeted call sites compare equal.
void drop_receivers(Program& program, const std::string& name) {
  rewrite_program(program, [&](Expr& e, const ExprContext&) {
    if (auto* call = std::get_if<Call>(&e.node); call && call->name == name) {
      call->receiver.reset();
    }
  });
}

Failure audit_move_method(const TransformationCase& c) {
  const auto& s = c.subject;
  if (s.target_classes.size() != 1) return "move has no single target";
  const std::string& target = s.target_classes[0];
  for (std::optional<std::string> a = target; a; a = parent_of(c.before, *a)) {
    if (*a == s.source_class) return "target inherits from the source";
  }
  for (std::optional<std::string> a = s.source_class; a; a = parent_of(c.before, *a)) {
    if (*a == target) return "source inherits from the target";
  }
  Program before = c.before;
  Program after = c.after;
  auto original = take(find_class(before, s.source_class)->methods, s.member);
  if (!find_class(after, target)) return "target class missing";
  auto moved = take(find_class(after, target)->methods, s.member);
  if (!original || !moved) return "method not found on both sides";
  if (!(*original == *moved)) return "moved method changed";
  if (find_class(after, s.source_class)->find_method(s.member)) {
    return "method still declared in the source";
  }
  drop_receivers(before, s.member);
  drop_receivers(after, s.member);
  return equal_or(after, before, "program changed beyond the moved method and its calls");
}

template <bool IsField>
auto& members_of(ClassDecl& c) {
  if constexpr (IsField) {
    return c.fields;
  } else {
    return c.methods;
  }
}

template <bool IsField>
Failure audit_pull_up(const TransformationCase& c) {
  const auto& s = c.subject;
  const auto parent = parent_of(c.before, s.source_class);
  if (!parent || s.target_classes != std::vector<std::string>{*parent}) {
    return "target is not the direct superclass";
  }
  Program before = c.before;
  Program after = c.after;
  auto original = take(members_of<IsField>(*find_class(before, s.source_class)), s.member);
  auto moved = take(members_of<IsField>(*find_class(after, *parent)), s.member);
  if (!original || !moved || !(*original == *moved)) return "member not moved verbatim";
  return equal_or(after, before, "program changed beyond the pulled-up member");
}

template <bool IsField>
Failure audit_push_down(const TransformationCase& c) {
  const auto& s = c.subject;
  const auto children = children_of(c.before, s.source_class);
  if (children.empty() || s.target_classes != children) {
    return "targets are not the direct subclasses";
  }
  Program before = c.before;
  Program after = c.after;
  auto original = take(members_of<IsField>(*find_class(before, s.source_class)), s.member);
  if (!original) return "member missing from the superclass";
  for (const auto& child : children) {
    auto copy = take(members_of<IsField>(*find_class(after, child)), s.member);
    if (!copy || !(*copy == *original)) return "subclass copy missing or altered";
  }
  auto stub = take(members_of<IsField>(*find_class(after, s.source_class)), s.member);
  if constexpr (IsField) {
    if (stub) return "field still declared in the superclass";
  } else {
    if (stub.has_value() != c.hard) return "stub presence disagrees with the hard flag";
    if (stub) {
      MethodDecl expected = *original;
      expected.is_abstract = true;
      expected.body.reset();
      if (!(*stub == expected) || !find_class(c.before, s.source_class)->is_abstract) {
        return "stub is not an abstract copy of the signature";
      }
    }
  }
  return equal_or(after, before, "program changed beyond the pushed-down member");
}

}  // namespace

std::optional<std::string> audit_case(const TransformationCase& c) {
  if (c.before == c.after) return "before and after are identical";
  if (!find_class(c.before, c.subject.source_class)) return "source class not in before";
  if (c.hard && c.kind != RefactoringKind::PushDownMethod) return "unexpected hard flag";
  switch (c.kind) {
    case RefactoringKind::RenameClass: return audit_rename(c, true);
    case RefactoringKind::RenameMethod:
    case RefactoringKind::RenameField: return audit_rename(c, false);
    case RefactoringKind::AddMethodParameter: return audit_add_parameter(c);
    case RefactoringKind::EncapsulateField: return audit_encapsulate(c);
    case RefactoringKind::MoveMethod: return audit_move_method(c);
    case RefactoringKind::PullUpField: return audit_pull_up<true>(c);
    case RefactoringKind::PullUpMethod: return audit_pull_up<false>(c);
    case RefactoringKind::PushDownField: return audit_push_down<true>(c);
    case RefactoringKind::PushDownMethod: return audit_push_down<false>(c);
    default: return "kind is not generated";
  }
}

}  // namespace refdet::gen
