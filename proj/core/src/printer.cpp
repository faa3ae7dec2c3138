#include <algorithm>

#include "refdet/syntax.hpp"

namespace refdet::syntax {
namespace {

constexpr std::string_view kIndent = "    ";

void print_expr(const Expr& e, std::string& out);

// Nested binary operands are always parenthesized so the printed form
// re-parses to the same tree without precedence reasoning.
void print_operand(const Expr& e, std::string& out) {
  if (std::holds_alternative<Binary>(e.node)) {
    out += '(';
    print_expr(e, out);
    out += ')';
  } else {
    print_expr(e, out);
  }
}

void print_args(const std::vector<Expr>& args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    print_expr(args[i], out);
  }
  out += ')';
}

void print_expr(const Expr& e, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          out += std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          out += n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, NameRef>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, This>) {
          out += "this";
        } else if constexpr (std::is_same_v<T, FieldAccess>) {
          print_operand(*n.receiver, out);
          out += '.';
          out += n.name;
        } else if constexpr (std::is_same_v<T, Call>) {
          if (n.receiver) {
            print_operand(**n.receiver, out);
            out += '.';
          }
          out += n.name;
          print_args(n.args, out);
        } else if constexpr (std::is_same_v<T, New>) {
          out += "new ";
          out += n.class_name;
          out += "()";
        } else if constexpr (std::is_same_v<T, Binary>) {
          print_operand(*n.lhs, out);
          out += ' ';
          out += to_string(n.op);
          out += ' ';
          print_operand(*n.rhs, out);
        }
      },
      e.node);
}

void print_stmt(const Stmt& s, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Return>) {
          out += "return ";
          print_expr(n.value, out);
        } else if constexpr (std::is_same_v<T, Assign>) {
          print_expr(n.target, out);
          out += " = ";
          print_expr(n.value, out);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          print_expr(n.expr, out);
        } else if constexpr (std::is_same_v<T, LocalDecl>) {
          out += n.type_name;
          out += ' ';
          out += n.name;
          out += " = ";
          print_expr(n.init, out);
        }
      },
      s.node);
  out += ';';
}

void print_visibility(Visibility v, std::string& out) {
  if (v != Visibility::Package) {
    out += to_string(v);
    out += ' ';
  }
}

void print_method(const MethodDecl& m, int indent, bool in_interface,
                  std::string& out) {
  std::string pad;
  for (int i = 0; i < indent; ++i) pad += kIndent;
  out += pad;
  print_visibility(m.visibility, out);
  if (m.is_abstract && !in_interface) out += "abstract ";
  out += m.return_type;
  out += ' ';
  out += m.name;
  out += '(';
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i) out += ", ";
    out += m.params[i].type_name;
    out += ' ';
    out += m.params[i].name;
  }
  out += ')';
  if (!m.body) {
    out += ";\n";
    return;
  }
  out += " {\n";
  for (const auto& s : *m.body) {
    out += pad;
    out += kIndent;
    print_stmt(s, out);
    out += '\n';
  }
  out += pad;
  out += "}\n";
}

}  // namespace

std::string print(const Expr& expr) {
  std::string out;
  print_expr(expr, out);
  return out;
}

std::string print(const Stmt& stmt) {
  std::string out;
  print_stmt(stmt, out);
  return out;
}

std::string print(const MethodDecl& method, int indent) {
  std::string out;
  print_method(method, indent, false, out);
  return out;
}

std::string print(const ClassDecl& decl) {
  std::string out;
  if (decl.is_interface) {
    out += "interface ";
    out += decl.name;
  } else {
    if (decl.is_abstract) out += "abstract ";
    out += "class ";
    out += decl.name;
    if (decl.superclass) {
      out += " extends ";
      out += *decl.superclass;
    }
    if (!decl.interfaces.empty()) {
      out += " implements ";
      for (std::size_t i = 0; i < decl.interfaces.size(); ++i) {
        if (i) out += ", ";
        out += decl.interfaces[i];
      }
    }
  }
  out += " {\n";
  for (const auto& f : decl.fields) {
    out += kIndent;
    print_visibility(f.visibility, out);
    out += f.type_name;
    out += ' ';
    out += f.name;
    if (f.initializer) {
      out += " = ";
      print_expr(*f.initializer, out);
    }
    out += ";\n";
  }
  for (const auto& m : decl.methods) {
    print_method(m, 1, decl.is_interface, out);
  }
  out += "}\n";
  return out;
}

std::string print(const CompilationUnit& unit) {
  std::string out = "package " + unit.package_name + ";\n";
  for (const auto& decl : unit.classes) {
    out += '\n';
    out += print(decl);
  }
  return out;
}

int program_loc(const Program& program) {
  int loc = 0;
  for (const auto& unit : program) {
    const std::string text = print(unit);
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      if (end > start) ++loc;
      start = end + 1;
    }
  }
  return loc;
}

}  // namespace refdet::syntax
