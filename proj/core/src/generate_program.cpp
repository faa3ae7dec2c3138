#include <algorithm>
#include <array>
#include <map>

#include "refdet/generate.hpp"
#include "refdet/resolve.hpp"
#include "refdet/syntax.hpp"

namespace refdet::gen {

using namespace refdet::syntax;

void GeneratorConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument(what); };
  if (classes_min < 1) bad("classes_min must be at least 1");
  if (classes_max < classes_min) bad("classes_max must be >= classes_min");
  if (classes_max > 26) bad("classes_max must be at most 26");
  if (fields_per_class_max < 0) bad("fields_per_class_max must be >= 0");
  if (methods_per_class_max < 1) bad("methods_per_class_max must be >= 1");
  if (!(inheritance_probability >= 0.0 && inheritance_probability <= 1.0)) {
    bad("inheritance_probability must be in [0, 1]");
  }
  if (!(abstract_probability >= 0.0 && abstract_probability <= 1.0)) {
    bad("abstract_probability must be in [0, 1]");
  }
  if (target_loc_min < 1 || target_loc_max < target_loc_min) {
    bad("target LOC range must be positive and ordered");
  }
  if (loc_slack < 0) bad("loc_slack must be >= 0");
  if (package_name.empty()) bad("package_name must be non-empty");
}

GenerationExhausted::GenerationExhausted(int drafts)
    : std::runtime_error("program generation gave up after " +
                         std::to_string(drafts) + " rejected drafts"),
      drafts_(drafts) {}

namespace {

constexpr std::array<std::string_view, 6> kIntFieldNames{
    "size", "count", "value", "total", "limit", "level"};
constexpr std::array<std::string_view, 3> kBoolFieldNames{"ready", "active",
                                                          "enabled"};
constexpr std::array<std::string_view, 10> kMethodNames{
    "compute", "update", "check", "reset", "process",
    "apply",   "scale",  "measure", "report", "run"};

enum class Shape { Getter, Pure, PureBinary, Setter, Check, Delegate };

Visibility draw_visibility(RandomStream& rng, double priv) {
  const double r = rng.unit();
  if (r < priv) return Visibility::Private;
  if (r < priv + 0.2) return Visibility::Protected;
  if (r < priv + 0.5) return Visibility::Public;
  return Visibility::Package;
}

const ClassDecl* find_in(const std::vector<ClassDecl>& classes, std::string_view name) {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// Nearest declaration of `name` strictly above `cls`.
const MethodDecl* inherited_method(const std::vector<ClassDecl>& classes,
                                   const ClassDecl& cls, std::string_view name) {
  auto super = cls.superclass;
  while (super) {
    const ClassDecl* decl = find_in(classes, *super);
    if (!decl) return nullptr;
    if (const MethodDecl* m = decl->find_method(name)) return m;
    super = decl->superclass;
  }
  return nullptr;
}

MethodDecl signature_for(Shape shape) {
  MethodDecl m;
  switch (shape) {
    case Shape::Getter:
    case Shape::Delegate:
      m.return_type = "int";
      break;
    case Shape::Pure:
      m.return_type = "int";
      m.params = {{"a", "int"}};
      break;
    case Shape::PureBinary:
      m.return_type = "int";
      m.params = {{"a", "int"}, {"b", "int"}};
      break;
    case Shape::Setter:
      m.return_type = "void";
      m.params = {{"v", "int"}};
      break;
    case Shape::Check:
      m.return_type = "boolean";
      break;
  }
  return m;
}

// Builds method bodies against a resolved skeleton of the program.
class BodyBuilder {
 public:
  BodyBuilder(const SymbolTable& table, RandomStream& rng) : table_(table), rng_(rng) {}

  std::vector<Stmt> body(const ClassDecl& cls, const MethodDecl& m, bool pure) {
    cls_ = &cls;
    method_ = &m;
    pure_ = pure;
    ctx_ = ExprContext{cls.name, &m, {}};
    for (const auto& p : m.params) ctx_.locals[p.name] = p.type_name;

    std::vector<Stmt> out;
    if (m.return_type == "int") {
      if (rng_.chance(0.25)) {
        out.push_back(LocalDecl{"t", "int", int_expr(1)});
        ctx_.locals["t"] = "int";
      }
      out.push_back(Return{int_expr(0)});
    } else if (m.return_type == "boolean") {
      out.push_back(Return{bool_expr()});
    } else {
      const int n = rng_.uniform(1, 2);
      for (int i = 0; i < n; ++i) {
        if (auto s = void_stmt()) out.push_back(std::move(*s));
      }
    }
    return out;
  }

 private:
  struct FieldChoice {
    std::string name;
    std::string owner;
  };

  // Fields visible by simple name from the current class.
  std::vector<FieldChoice> visible_fields(std::string_view cls, std::string_view type,
                                          bool from_outside) const {
    std::vector<FieldChoice> out;
    std::vector<std::string> chain{std::string(cls)};
    for (auto& a : table_.ancestors(cls)) chain.push_back(a);
    for (const auto& c : chain) {
      for (const auto& f : table_.find_class(c)->fields) {
        if (f.type_name != type) continue;
        auto nearest = table_.lookup_field(cls, f.name);
        if (!nearest || nearest->owner != c) continue;
        if (f.visibility == Visibility::Private && c != cls_->name) continue;
        if (from_outside && f.visibility == Visibility::Private) continue;
        out.push_back({f.name, c});
      }
    }
    return out;
  }

  std::vector<const MethodDecl*> visible_methods(std::string_view cls,
                                                 std::string_view ret) const {
    std::vector<const MethodDecl*> out;
    std::vector<std::string> chain{std::string(cls)};
    for (auto& a : table_.ancestors(cls)) chain.push_back(a);
    for (const auto& c : chain) {
      for (const auto& m : table_.find_class(c)->methods) {
        if (m.return_type != ret) continue;
        if (cls == cls_->name && m.name == method_->name) continue;
        auto nearest = table_.lookup_method(cls, m.name);
        if (!nearest || nearest->owner != c) continue;
        if (m.visibility == Visibility::Private && c != cls_->name) continue;
        out.push_back(&m);
      }
    }
    return out;
  }

  // Class-typed fields of the current class usable as receivers.
  std::vector<FieldChoice> object_fields() const {
    std::vector<FieldChoice> out;
    for (const auto& name : table_.class_names()) {
      if (name == cls_->name) continue;
      for (auto& f : visible_fields(cls_->name, name, false)) out.push_back(f);
    }
    return out;
  }

  std::vector<std::string> locals_of(std::string_view type) const {
    std::vector<std::string> out;
    for (const auto& [name, t] : ctx_.locals) {
      if (t == type) out.push_back(name);
    }
    return out;
  }

  Expr field_ref(const std::string& name) {
    if (rng_.chance(0.3)) return FieldAccess{This{}, name};
    return NameRef{name};
  }

  std::vector<Expr> args_for(const MethodDecl& m, int depth) {
    std::vector<Expr> args;
    for (const auto& p : m.params) {
      args.push_back(p.type_name == "int" ? int_expr(depth + 1) : Expr(BoolLit{true}));
    }
    return args;
  }

  Expr int_expr(int depth) {
    std::vector<std::function<std::optional<Expr>()>> options;
    auto locals = locals_of("int");
    options.push_back([&]() -> std::optional<Expr> {
      return IntLit{rng_.uniform(1, 9)};
    });
    if (!locals.empty()) {
      options.push_back([&]() -> std::optional<Expr> {
        return NameRef{locals[rng_.below(locals.size())]};
      });
      options.push_back([&]() -> std::optional<Expr> {
        return NameRef{locals[rng_.below(locals.size())]};
      });
    }
    if (!pure_) {
      auto fields = visible_fields(cls_->name, "int", false);
      if (!fields.empty()) {
        options.push_back([&, fields]() -> std::optional<Expr> {
          return field_ref(fields[rng_.below(fields.size())].name);
        });
        options.push_back([&, fields]() -> std::optional<Expr> {
          return field_ref(fields[rng_.below(fields.size())].name);
        });
      }
      auto methods = visible_methods(cls_->name, "int");
      if (!methods.empty() && depth < 2) {
        options.push_back([&, methods]() -> std::optional<Expr> {
          const MethodDecl* m = methods[rng_.below(methods.size())];
          return Call{std::nullopt, m->name, args_for(*m, depth)};
        });
      }
    }
    auto objects = pure_ ? std::vector<FieldChoice>{} : object_fields();
    if (!objects.empty() && depth < 2) {
      options.push_back([&, objects]() -> std::optional<Expr> {
        const auto& obj = objects[rng_.below(objects.size())];
        const std::string type = table_.field({obj.owner, obj.name})->type_name;
        auto remote = visible_methods_outside(type, "int");
        if (remote.empty()) return std::nullopt;
        const MethodDecl* m = remote[rng_.below(remote.size())];
        return Call{Box<Expr>(field_ref(obj.name)), m->name, args_for(*m, depth)};
      });
      options.push_back([&, objects]() -> std::optional<Expr> {
        const auto& obj = objects[rng_.below(objects.size())];
        const std::string type = table_.field({obj.owner, obj.name})->type_name;
        auto remote = visible_fields_outside(type, "int");
        if (remote.empty()) return std::nullopt;
        return FieldAccess{field_ref(obj.name), remote[rng_.below(remote.size())]};
      });
    }
    if (depth < 1) {
      options.push_back([&]() -> std::optional<Expr> {
        static constexpr std::array<BinaryOp, 3> kOps{BinaryOp::Add, BinaryOp::Sub,
                                                      BinaryOp::Mul};
        const BinaryOp op = kOps[rng_.below(kOps.size())];
        Expr lhs = int_expr(depth + 1);
        Expr rhs = int_expr(depth + 1);
        return Binary{op, std::move(lhs), std::move(rhs)};
      });
    }
    for (int tries = 0; tries < 4; ++tries) {
      if (auto e = options[rng_.below(options.size())]()) return std::move(*e);
    }
    return IntLit{rng_.uniform(1, 9)};
  }

  std::vector<std::string> visible_fields_outside(std::string_view type_cls,
                                                  std::string_view type) const {
    std::vector<std::string> out;
    std::vector<std::string> chain{std::string(type_cls)};
    for (auto& a : table_.ancestors(type_cls)) chain.push_back(a);
    for (const auto& c : chain) {
      for (const auto& f : table_.find_class(c)->fields) {
        if (f.type_name != type || f.visibility == Visibility::Private) continue;
        auto nearest = table_.lookup_field(type_cls, f.name);
        if (nearest && nearest->owner == c) out.push_back(f.name);
      }
    }
    return out;
  }

  std::vector<const MethodDecl*> visible_methods_outside(std::string_view type_cls,
                                                         std::string_view ret) const {
    std::vector<const MethodDecl*> out;
    std::vector<std::string> chain{std::string(type_cls)};
    for (auto& a : table_.ancestors(type_cls)) chain.push_back(a);
    for (const auto& c : chain) {
      for (const auto& m : table_.find_class(c)->methods) {
        if (m.return_type != ret || m.visibility == Visibility::Private) continue;
        auto nearest = table_.lookup_method(type_cls, m.name);
        if (nearest && nearest->owner == c) out.push_back(&m);
      }
    }
    return out;
  }

  Expr bool_expr() {
    const double r = rng_.unit();
    if (!pure_) {
      auto fields = visible_fields(cls_->name, "boolean", false);
      if (r < 0.3 && !fields.empty()) {
        Expr flag = field_ref(fields[rng_.below(fields.size())].name);
        if (rng_.chance(0.5)) return flag;
        static constexpr std::array<BinaryOp, 2> kOps{BinaryOp::And, BinaryOp::Or};
        Expr cmp = Binary{BinaryOp::Gt, int_expr(1), IntLit{rng_.uniform(0, 5)}};
        return Binary{kOps[rng_.below(2)], std::move(flag), std::move(cmp)};
      }
    }
    static constexpr std::array<BinaryOp, 4> kCmp{BinaryOp::Lt, BinaryOp::Gt,
                                                  BinaryOp::Eq, BinaryOp::Ne};
    Expr lhs = int_expr(1);
    return Binary{kCmp[rng_.below(kCmp.size())], std::move(lhs),
                  IntLit{rng_.uniform(0, 9)}};
  }

  std::optional<Stmt> void_stmt() {
    auto ints = visible_fields(cls_->name, "int", false);
    auto bools = visible_fields(cls_->name, "boolean", false);
    const double r = rng_.unit();
    if (!ints.empty() && r < 0.6) {
      Expr target = field_ref(ints[rng_.below(ints.size())].name);
      return Assign{std::move(target), int_expr(0)};
    }
    if (!bools.empty() && r < 0.75) {
      Expr target = field_ref(bools[rng_.below(bools.size())].name);
      return Assign{std::move(target), bool_expr()};
    }
    auto objects = object_fields();
    if (!objects.empty()) {
      const auto& obj = objects[rng_.below(objects.size())];
      const std::string type = table_.field({obj.owner, obj.name})->type_name;
      auto remote = visible_methods_outside(type, "void");
      if (!remote.empty()) {
        const MethodDecl* m = remote[rng_.below(remote.size())];
        return ExprStmt{Call{Box<Expr>(field_ref(obj.name)), m->name, args_for(*m, 0)}};
      }
      auto remote_ints = visible_fields_outside(type, "int");
      if (!remote_ints.empty()) {
        Expr target = FieldAccess{field_ref(obj.name),
                                  remote_ints[rng_.below(remote_ints.size())]};
        return Assign{std::move(target), int_expr(1)};
      }
    }
    auto locals = locals_of("int");
    if (!ints.empty()) {
      Expr target = field_ref(ints[rng_.below(ints.size())].name);
      return Assign{std::move(target), int_expr(0)};
    }
    if (!locals.empty() && !ctx_.locals.contains("w")) {
      Stmt local = LocalDecl{"w", "int", int_expr(0)};
      ctx_.locals["w"] = "int";
      return local;
    }
    return std::nullopt;
  }

  const SymbolTable& table_;
  RandomStream& rng_;
  const ClassDecl* cls_ = nullptr;
  const MethodDecl* method_ = nullptr;
  bool pure_ = false;
  ExprContext ctx_;
};

std::optional<Program> draft_program(const GeneratorConfig& cfg, RandomStream& rng) {
  const int n = rng.uniform(cfg.classes_min, cfg.classes_max);
  std::vector<ClassDecl> classes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    classes[i].name = std::string(1, static_cast<char>('A' + i));
    if (i > 0 && rng.chance(cfg.inheritance_probability)) {
      classes[i].superclass = classes[rng.below(static_cast<std::uint64_t>(i))].name;
    }
  }
  for (auto& c : classes) {
    const bool has_sub = std::any_of(classes.begin(), classes.end(), [&](const auto& o) {
      return o.superclass == c.name;
    });
    c.is_abstract = has_sub && rng.chance(cfg.abstract_probability);
  }

  // Fields.
  for (auto& c : classes) {
    const int count = rng.uniform(0, cfg.fields_per_class_max);
    for (int k = 0; k < count; ++k) {
      FieldDecl f;
      const double t = rng.unit();
      if (t < 0.6 || n == 1) {
        f.type_name = "int";
        f.name = kIntFieldNames[rng.below(kIntFieldNames.size())];
      } else if (t < 0.8) {
        f.type_name = "boolean";
        f.name = kBoolFieldNames[rng.below(kBoolFieldNames.size())];
      } else {
        std::vector<std::string> others;
        for (const auto& o : classes) {
          if (o.name != c.name) others.push_back(o.name);
        }
        f.type_name = others[rng.below(others.size())];
        f.name = std::string(1, static_cast<char>(f.type_name[0] - 'A' + 'a'));
      }
      if (c.find_field(f.name)) continue;
      f.visibility = draw_visibility(rng, 0.2);
      if (f.type_name == "int" && rng.chance(0.3)) {
        f.initializer = IntLit{rng.uniform(0, 9)};
      } else if (f.type_name == "boolean" && rng.chance(0.2)) {
        f.initializer = BoolLit{rng.chance(0.5)};
      } else if (!is_primitive_type(f.type_name) && rng.chance(0.25) &&
                 !find_in(classes, f.type_name)->is_abstract) {
        f.initializer = New{f.type_name};
      }
      c.fields.push_back(std::move(f));
    }
  }

  // Method signatures; superclasses precede subclasses in `classes`.
  std::map<std::pair<std::string, std::string>, bool> pure_methods;
  for (auto& c : classes) {
    const int count = rng.uniform(1, cfg.methods_per_class_max);
    for (int k = 0; k < count; ++k) {
      const std::string name(kMethodNames[rng.below(kMethodNames.size())]);
      if (c.find_method(name)) continue;
      MethodDecl m;
      if (const MethodDecl* inherited = inherited_method(classes, c, name)) {
        if (inherited->visibility == Visibility::Private) continue;
        m = *inherited;
        m.is_abstract = false;
      } else {
        static constexpr std::array<Shape, 6> kShapes{
            Shape::Getter, Shape::Pure,  Shape::PureBinary,
            Shape::Setter, Shape::Check, Shape::Delegate};
        const Shape shape = kShapes[rng.below(kShapes.size())];
        m = signature_for(shape);
        m.visibility = draw_visibility(rng, 0.1);
        if (c.is_abstract && rng.chance(0.35) && m.visibility != Visibility::Private) {
          m.is_abstract = true;
        }
        if (shape == Shape::Pure || shape == Shape::PureBinary) {
          pure_methods[{c.name, name}] = rng.chance(0.6);
        }
      }
      m.name = name;
      if (!m.is_abstract) m.body = std::vector<Stmt>{};
      c.methods.push_back(std::move(m));
    }
  }
  // Direct subclasses implement every abstract method they inherit.
  for (const auto& z : classes) {
    for (const auto& m : z.methods) {
      if (!m.is_abstract) continue;
      for (auto& s : classes) {
        if (s.superclass != z.name || s.find_method(m.name)) continue;
        MethodDecl impl = m;
        impl.is_abstract = false;
        impl.body = std::vector<Stmt>{};
        s.methods.push_back(std::move(impl));
      }
    }
  }

  Program program;
  for (auto& c : classes) {
    program.push_back(CompilationUnit{cfg.package_name, {std::move(c)}});
  }
  SymbolTable skeleton;
  try {
    skeleton = resolve(program);
  } catch (const ResolutionError&) {
    return std::nullopt;
  }
  BodyBuilder builder(skeleton, rng);
  for (auto& unit : program) {
    for (auto& c : unit.classes) {
      const ClassDecl& view = *skeleton.find_class(c.name);
      for (std::size_t i = 0; i < c.methods.size(); ++i) {
        auto& m = c.methods[i];
        if (m.is_abstract) continue;
        const bool pure = pure_methods[{c.name, m.name}];
        m.body = builder.body(view, view.methods[i], pure);
      }
    }
  }
  return program;
}

}  // namespace

Program generate_program(const GeneratorConfig& config, RandomStream& stream) {
  config.validate();
  const int lo = config.target_loc_min - config.loc_slack;
  const int hi = config.target_loc_max + config.loc_slack;
  for (int draft = 0; draft < kMaxDrafts; ++draft) {
    auto program = draft_program(config, stream);
    if (!program || !resolves(*program)) continue;
    const int loc = program_loc(*program);
    if (loc < lo || loc > hi) continue;
    return std::move(*program);
  }
  throw GenerationExhausted(kMaxDrafts);
}

}  // namespace refdet::gen
