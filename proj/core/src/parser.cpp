#include <cctype>
#include <charconv>
#include <set>
#include <vector>

#include "refdet/syntax.hpp"

namespace refdet::syntax {

ParseError::ParseError(int line, int column, std::string expected,
                       std::string found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": expected " + expected + ", found " +
                         (found.empty() ? "end of input" : "'" + found + "'")),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class TokenKind { Identifier, Keyword, Integer, Punct, End };

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string, std::less<>> kKeywords{
    "package", "class",   "interface", "abstract", "extends", "implements",
    "public",  "private", "protected", "int",      "boolean", "void",
    "return",  "this",    "new",       "true",     "false",
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int tok_line = line;
    const int tok_col = column;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      std::string word(src.substr(i, j - i));
      const auto kind =
          kKeywords.contains(word) ? TokenKind::Keyword : TokenKind::Identifier;
      tokens.push_back({kind, std::move(word), tok_line, tok_col});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tokens.push_back(
          {TokenKind::Integer, std::string(src.substr(i, j - i)), tok_line, tok_col});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kTwoChar[] = {"==", "!=", "<=", ">=",
                                                    "&&", "||"};
    bool matched = false;
    for (auto op : kTwoChar) {
      if (src.substr(i, 2) == op) {
        tokens.push_back({TokenKind::Punct, std::string(op), tok_line, tok_col});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kSingle = "{}();,.=<>+-*";
    if (kSingle.find(c) != std::string_view::npos) {
      tokens.push_back({TokenKind::Punct, std::string(1, c), tok_line, tok_col});
      advance(1);
      continue;
    }
    throw ParseError(tok_line, tok_col, "a token", std::string(1, c));
  }
  tokens.push_back({TokenKind::End, "", line, column});
  return tokens;
}

int precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*") return 6;
  return 0;
}

BinaryOp to_binary_op(std::string_view op) {
  if (op == "+") return BinaryOp::Add;
  if (op == "-") return BinaryOp::Sub;
  if (op == "*") return BinaryOp::Mul;
  if (op == "<") return BinaryOp::Lt;
  if (op == "<=") return BinaryOp::Le;
  if (op == ">") return BinaryOp::Gt;
  if (op == ">=") return BinaryOp::Ge;
  if (op == "==") return BinaryOp::Eq;
  if (op == "!=") return BinaryOp::Ne;
  if (op == "&&") return BinaryOp::And;
  return BinaryOp::Or;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  CompilationUnit unit() {
    CompilationUnit out;
    expect_keyword("package");
    out.package_name = identifier("package name");
    while (accept_punct(".")) {
      out.package_name += '.';
      out.package_name += identifier("package name segment");
    }
    expect_punct(";");
    while (peek().kind != TokenKind::End) {
      out.classes.push_back(type_decl());
    }
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, expected, t.text);
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Punct && peek(ahead).text == p;
  }
  bool is_keyword(std::string_view k, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Keyword && peek(ahead).text == k;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!is_keyword(k)) return false;
    next();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("'" + std::string(p) + "'");
  }
  void expect_keyword(std::string_view k) {
    if (!accept_keyword(k)) fail("'" + std::string(k) + "'");
  }
  std::string identifier(const std::string& what) {
    if (peek().kind != TokenKind::Identifier) fail(what);
    return next().text;
  }
  bool at_type() const {
    return peek().kind == TokenKind::Identifier || is_keyword("int") ||
           is_keyword("boolean");
  }
  std::string type_name() {
    if (is_keyword("int") || is_keyword("boolean")) return next().text;
    return identifier("type name");
  }
  void begin_span(SourceSpan& span) const {
    span.begin_line = peek().line;
    span.begin_column = peek().column;
  }
  void end_span(SourceSpan& span) const {
    const Token& last = tokens_[pos_ == 0 ? 0 : pos_ - 1];
    span.end_line = last.line;
    span.end_column = last.column + static_cast<int>(last.text.size());
  }

  ClassDecl type_decl() {
    ClassDecl decl;
    begin_span(decl.span);
    if (accept_keyword("interface")) {
      decl.is_interface = true;
      decl.name = identifier("interface name");
      expect_punct("{");
      while (!accept_punct("}")) {
        MethodDecl m;
        begin_span(m.span);
        m.is_abstract = true;
        m.return_type = is_keyword("void") ? next().text : type_name();
        m.name = identifier("method name");
        m.params = params();
        expect_punct(";");
        end_span(m.span);
        decl.methods.push_back(std::move(m));
      }
      end_span(decl.span);
      return decl;
    }
    decl.is_abstract = accept_keyword("abstract");
    expect_keyword("class");
    decl.name = identifier("class name");
    if (accept_keyword("extends")) decl.superclass = identifier("superclass name");
    if (accept_keyword("implements")) {
      do {
        decl.interfaces.push_back(identifier("interface name"));
      } while (accept_punct(","));
    }
    expect_punct("{");
    while (!accept_punct("}")) member(decl);
    end_span(decl.span);
    return decl;
  }

  void member(ClassDecl& decl) {
    SourceSpan span;
    begin_span(span);
    Visibility vis = Visibility::Package;
    if (accept_keyword("public")) {
      vis = Visibility::Public;
    } else if (accept_keyword("protected")) {
      vis = Visibility::Protected;
    } else if (accept_keyword("private")) {
      vis = Visibility::Private;
    }
    const bool is_abstract = accept_keyword("abstract");
    std::string type;
    if (is_keyword("void")) {
      type = next().text;
    } else if (at_type()) {
      type = type_name();
    } else {
      fail("member declaration");
    }
    std::string name = identifier("member name");
    if (is_punct("(")) {
      MethodDecl m;
      m.name = std::move(name);
      m.visibility = vis;
      m.is_abstract = is_abstract;
      m.return_type = std::move(type);
      m.params = params();
      if (is_abstract) {
        expect_punct(";");
      } else {
        m.body = block();
      }
      m.span = span;
      end_span(m.span);
      decl.methods.push_back(std::move(m));
      return;
    }
    if (is_abstract || type == "void") fail("'('");
    FieldDecl f;
    f.name = std::move(name);
    f.type_name = std::move(type);
    f.visibility = vis;
    if (accept_punct("=")) f.initializer = expression();
    expect_punct(";");
    f.span = span;
    end_span(f.span);
    decl.fields.push_back(std::move(f));
  }

  std::vector<Param> params() {
    std::vector<Param> out;
    expect_punct("(");
    if (accept_punct(")")) return out;
    do {
      Param p;
      if (!at_type()) fail("parameter type");
      p.type_name = type_name();
      p.name = identifier("parameter name");
      out.push_back(std::move(p));
    } while (accept_punct(","));
    expect_punct(")");
    return out;
  }

  std::vector<Stmt> block() {
    std::vector<Stmt> out;
    expect_punct("{");
    while (!accept_punct("}")) out.push_back(statement());
    return out;
  }

  Stmt statement() {
    if (accept_keyword("return")) {
      Expr value = expression();
      expect_punct(";");
      return Return{std::move(value)};
    }
    // A local declaration starts with a type followed by a plain identifier.
    const bool primitive_decl =
        (is_keyword("int") || is_keyword("boolean")) &&
        peek(1).kind == TokenKind::Identifier;
    const bool class_decl = peek().kind == TokenKind::Identifier &&
                            peek(1).kind == TokenKind::Identifier;
    if (primitive_decl || class_decl) {
      LocalDecl local{.name = {}, .type_name = type_name(), .init = IntLit{0}};
      local.name = identifier("local variable name");
      expect_punct("=");
      local.init = expression();
      expect_punct(";");
      return local;
    }
    const Token& start = peek();
    Expr lhs = expression();
    if (accept_punct("=")) {
      if (!std::holds_alternative<NameRef>(lhs.node) &&
          !std::holds_alternative<FieldAccess>(lhs.node)) {
        throw ParseError(start.line, start.column, "assignable expression",
                         start.text);
      }
      Expr value = expression();
      expect_punct(";");
      return Assign{std::move(lhs), std::move(value)};
    }
    expect_punct(";");
    return ExprStmt{std::move(lhs)};
  }

  Expr expression(int min_prec = 1) {
    Expr lhs = postfix();
    while (peek().kind == TokenKind::Punct) {
      const std::string op = peek().text;
      const int prec = precedence(op);
      if (prec == 0 || prec < min_prec) break;
      next();
      Expr rhs = expression(prec + 1);
      lhs = Binary{to_binary_op(op), std::move(lhs), std::move(rhs)};
    }
    return lhs;
  }

  Expr postfix() {
    Expr e = primary();
    while (accept_punct(".")) {
      std::string name = identifier("member name");
      if (is_punct("(")) {
        e = Call{Box<Expr>(std::move(e)), std::move(name), arguments()};
      } else {
        e = FieldAccess{std::move(e), std::move(name)};
      }
    }
    return e;
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> out;
    expect_punct("(");
    if (accept_punct(")")) return out;
    do {
      out.push_back(expression());
    } while (accept_punct(","));
    expect_punct(")");
    return out;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Integer) {
      std::int64_t value = 0;
      auto [ptr, ec] =
          std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec != std::errc{}) fail("integer literal in range");
      next();
      return IntLit{value};
    }
    if (accept_keyword("true")) return BoolLit{true};
    if (accept_keyword("false")) return BoolLit{false};
    if (accept_keyword("this")) return This{};
    if (accept_keyword("new")) {
      New n{identifier("class name")};
      expect_punct("(");
      expect_punct(")");
      return n;
    }
    if (accept_punct("(")) {
      Expr inner = expression();
      expect_punct(")");
      return inner;
    }
    if (t.kind == TokenKind::Identifier) {
      std::string name = next().text;
      if (is_punct("(")) return Call{std::nullopt, std::move(name), arguments()};
      return NameRef{std::move(name)};
    }
    fail("expression");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

CompilationUnit parse(std::string_view source) {
  return Parser(tokenize(source)).unit();
}

}  // namespace refdet::syntax
