#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "refdet/ast.hpp"

namespace refdet::syntax {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

/// Parses one source file. The grammar is documented in docs/language.md.
CompilationUnit parse(std::string_view source);

/// Canonical text of a unit: 4-space indent, one member per line, fields
/// before methods, LF line endings, trailing newline.
std::string print(const CompilationUnit& unit);
std::string print(const ClassDecl& decl);
std::string print(const MethodDecl& method, int indent = 0);
std::string print(const Expr& expr);
std::string print(const Stmt& stmt);

/// Non-blank line count of the printed program.
int program_loc(const Program& program);

}  // namespace refdet::syntax
