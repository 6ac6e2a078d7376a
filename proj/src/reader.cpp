#include "classlang/reader.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace classlang {

namespace {

bool is_delimiter(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == '"' || c == ';' || c == ' ' ||
         c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_boolean_text(std::string_view t) {
  return t == "true" || t == "false" || t == "#true" || t == "#false" || t == "#t" || t == "#f";
}

// p/q with a zero denominator looks like a number but is not one.
bool is_zero_fraction(std::string_view t) {
  auto slash = t.find('/');
  if (slash == std::string_view::npos || slash == 0) return false;
  auto q = t.substr(slash + 1);
  auto p = t.substr(0, slash);
  if (!p.empty() && (p.front() == '-' || p.front() == '+')) p.remove_prefix(1);
  if (p.empty() || q.empty()) return false;
  auto digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  return digits(p) && digits(q) && std::all_of(q.begin(), q.end(), [](char c) { return c == '0'; });
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '\n') {
        advance();
        continue;
      }
      if (is_delimiter(c) && c != '(' && c != ')' && c != '[' && c != ']' && c != '"' && c != ';') {
        advance();
        continue;
      }
      if (c == ';') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
        continue;
      }
      SourcePos pos{line_, col_};
      std::size_t start = i_;
      if (c == '(' || c == '[') {
        advance();
        out.push_back({TokenKind::lparen, std::string(1, c), pos, start});
        continue;
      }
      if (c == ')' || c == ']') {
        advance();
        out.push_back({TokenKind::rparen, std::string(1, c), pos, start});
        continue;
      }
      if (c == '"') {
        lex_string(out, pos);
        continue;
      }
      if (c == '\'' || c == '`' || c == ',') {
        throw Error(ErrorKind::lex, std::string("quotation with `") + c + "` is not supported", pos);
      }
      while (i_ < src_.size() && !is_delimiter(src_[i_])) advance();
      classify(std::string(src_.substr(start, i_ - start)), pos, start, out);
    }
    return out;
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void lex_string(std::vector<Token>& out, SourcePos pos) {
    std::size_t start = i_;
    advance();
    while (true) {
      if (i_ >= src_.size()) throw Error(ErrorKind::lex, "unterminated string literal", pos);
      char c = src_[i_];
      if (c == '\\') {
        advance();
        if (i_ >= src_.size()) throw Error(ErrorKind::lex, "unterminated string literal", pos);
        advance();
        continue;
      }
      advance();
      if (c == '"') break;
    }
    out.push_back({TokenKind::string_literal, std::string(src_.substr(start, i_ - start)), pos, start});
  }

  void classify(std::string text, SourcePos pos, std::size_t start, std::vector<Token>& out) {
    if (text == ".") {
      out.push_back({TokenKind::dot, text, pos, start});
      return;
    }
    if (Number::parse(text)) {
      out.push_back({TokenKind::number_literal, text, pos, start});
      return;
    }
    if (is_zero_fraction(text)) {
      throw Error(ErrorKind::lex, "division by zero in number literal `" + text + "`", pos);
    }
    if (is_boolean_text(text)) {
      out.push_back({TokenKind::boolean_literal, text, pos, start});
      return;
    }
    if (text.front() == '#') {
      throw Error(ErrorKind::lex, "unsupported `#` syntax `" + text + "`", pos);
    }
    if (text.size() > 1 && text[0] == '.' && text[1] != '.') {
      out.push_back({TokenKind::dot, ".", pos, start});
      classify(text.substr(1), SourcePos{pos.line, pos.column + 1}, start + 1, out);
      return;
    }
    out.push_back({TokenKind::identifier, text, pos, start});
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string unescape(const Token& tok) {
  const std::string& t = tok.text;
  std::string out;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    char c = t[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    char e = t[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case '\\': out += '\\'; break;
      case '"': out += '"'; break;
      default:
        throw Error(ErrorKind::lex, std::string("unknown escape sequence `\\") + e + "`", tok.pos);
    }
  }
  return out;
}

const std::set<std::string, std::less<>> kKeywords = {
    "define", "define-class", "lambda", "cond",  "else",         "if",
    "and",    "or",           "new",    "send",  "this",         "check-expect",
    "check-within", "require", "big-bang",
};

bool is_keyword(std::string_view name) { return kKeywords.find(name) != kKeywords.end(); }

[[noreturn]] void parse_fail(const std::string& message, SourcePos pos) {
  throw Error(ErrorKind::parse, message, pos);
}

class Parser {
 public:
  explicit Parser(LanguageLevel level) : level_(level) {}

  Defn top_level(const Datum& d) {
    if (d.kind == Datum::Kind::list && !d.items.empty() &&
        d.items[0].is_atom(TokenKind::identifier) && !has_dot(d)) {
      const std::string& head = d.items[0].token.text;
      if (head == "define") return definition(d);
      if (head == "define-class") return class_definition(d);
      if (head == "check-expect" || head == "check-within") return test(d);
      if (head == "require") return require(d);
      if (head == "big-bang") {
        if (d.items.size() != 2) {
          parse_fail("big-bang: consumes a single argument, the initial world", d.pos);
        }
        return BigBangDefn{expr(d.items[1], false), d.pos};
      }
    }
    return TopExpr{expr(d, false), d.pos};
  }

  ExprPtr expr(const Datum& d, bool in_method) {
    if (d.kind == Datum::Kind::atom) return atom(d, in_method);
    if (d.items.empty()) parse_fail("empty application `()`", d.pos);
    if (has_dot(d)) {
      if (!level_.allows_dot_notation()) throw LevelError("dot notation", 1, d.pos);
      return desugar(d, in_method);
    }
    const Datum& head = d.items[0];
    if (head.is_atom(TokenKind::identifier) && is_keyword(head.token.text)) {
      return keyword_form(d, in_method);
    }
    ast::Apply app{expr(head, in_method), {}};
    for (std::size_t i = 1; i < d.items.size(); ++i) app.args.push_back(expr(d.items[i], in_method));
    return make_expr(std::move(app), d.pos);
  }

  ExprPtr desugar(const Datum& d, bool in_method) {
    std::vector<std::vector<const Datum*>> segments(1);
    for (const auto& item : d.items) {
      if (item.is_dot()) {
        segments.emplace_back();
      } else {
        segments.back().push_back(&item);
      }
    }
    if (segments[0].empty()) parse_fail("dot notation: missing receiver before `.`", d.pos);
    if (segments[0].size() != 1) {
      parse_fail("dot notation: the receiver before the first `.` must be a single expression",
                 segments[0][1]->pos);
    }
    ExprPtr receiver = expr(*segments[0][0], in_method);
    for (std::size_t s = 1; s < segments.size(); ++s) {
      const auto& seg = segments[s];
      if (seg.empty()) parse_fail("dot notation: expected a message name after `.`", d.pos);
      if (!seg[0]->is_atom(TokenKind::identifier) || is_keyword(seg[0]->token.text)) {
        parse_fail("dot notation: expected a message name after `.`", seg[0]->pos);
      }
      ast::Send send{receiver, seg[0]->token.text, {}};
      for (std::size_t i = 1; i < seg.size(); ++i) send.args.push_back(expr(*seg[i], in_method));
      receiver = make_expr(std::move(send), seg[0]->pos);
    }
    return receiver;
  }

 private:
  static bool has_dot(const Datum& d) {
    return std::any_of(d.items.begin(), d.items.end(), [](const Datum& x) { return x.is_dot(); });
  }

  ExprPtr atom(const Datum& d, bool in_method) {
    const Token& t = d.token;
    switch (t.kind) {
      case TokenKind::number_literal:
        return make_expr(ast::NumberLit{*Number::parse(t.text)}, t.pos);
      case TokenKind::string_literal:
        return make_expr(ast::StringLit{unescape(t)}, t.pos);
      case TokenKind::boolean_literal:
        return make_expr(ast::BoolLit{t.text == "true" || t.text == "#true" || t.text == "#t"}, t.pos);
      case TokenKind::dot:
        parse_fail("unexpected `.`", t.pos);
      case TokenKind::identifier:
        if (t.text == "this") {
          if (!in_method) parse_fail("this: allowed only inside a method body", t.pos);
          return make_expr(ast::This{}, t.pos);
        }
        if (t.text == "else") parse_fail("else: not allowed here, because this is not a cond clause", t.pos);
        if (is_keyword(t.text)) {
          parse_fail(t.text + ": expected an open parenthesis before " + t.text, t.pos);
        }
        return make_expr(ast::Var{t.text}, t.pos);
      default:
        parse_fail("unexpected token", t.pos);
    }
  }

  std::string identifier(const Datum& d, const std::string& what) {
    if (!d.is_atom(TokenKind::identifier) || is_keyword(d.token.text)) {
      parse_fail("expected " + what, d.pos);
    }
    return d.token.text;
  }

  std::vector<std::string> params(const Datum& d, const std::string& form) {
    if (d.kind != Datum::Kind::list) parse_fail(form + ": expected a parenthesized parameter list", d.pos);
    std::vector<std::string> out;
    for (const auto& p : d.items) {
      std::string name = identifier(p, "a parameter name in " + form);
      if (std::find(out.begin(), out.end(), name) != out.end()) {
        parse_fail(form + ": duplicate parameter `" + name + "`", p.pos);
      }
      out.push_back(std::move(name));
    }
    return out;
  }

  ExprPtr keyword_form(const Datum& d, bool in_method) {
    const std::string& head = d.items[0].token.text;
    const auto n = d.items.size();
    if (head == "lambda") {
      if (n != 3) parse_fail("lambda: expected parameters and exactly one body expression", d.pos);
      // Sub-parts go into locals first: GCC 11 leaks earlier members when a
      // later aggregate initializer throws.
      auto ps = params(d.items[1], "lambda");
      auto body = expr(d.items[2], in_method);
      return make_expr(ast::Lambda{std::move(ps), std::move(body)}, d.pos);
    }
    if (head == "if") {
      if (n != 4) parse_fail("if: expected a question and two answers", d.pos);
      auto test = expr(d.items[1], in_method);
      auto then = expr(d.items[2], in_method);
      auto otherwise = expr(d.items[3], in_method);
      return make_expr(ast::If{std::move(test), std::move(then), std::move(otherwise)}, d.pos);
    }
    if (head == "cond") return cond(d, in_method);
    if (head == "and" || head == "or") {
      if (n < 3) parse_fail(head + ": expects at least 2 arguments", d.pos);
      std::vector<ExprPtr> ops;
      for (std::size_t i = 1; i < n; ++i) ops.push_back(expr(d.items[i], in_method));
      if (head == "and") return make_expr(ast::And{std::move(ops)}, d.pos);
      return make_expr(ast::Or{std::move(ops)}, d.pos);
    }
    if (head == "new") {
      if (n < 2) parse_fail("new: expected a class name", d.pos);
      ast::New node{identifier(d.items[1], "a class name after new"), {}};
      for (std::size_t i = 2; i < n; ++i) node.args.push_back(expr(d.items[i], in_method));
      return make_expr(std::move(node), d.pos);
    }
    if (head == "send") {
      if (n < 3) parse_fail("send: expected an object and a message name", d.pos);
      auto receiver = expr(d.items[1], in_method);
      ast::Send node{std::move(receiver), identifier(d.items[2], "a message name"), {}};
      for (std::size_t i = 3; i < n; ++i) node.args.push_back(expr(d.items[i], in_method));
      return make_expr(std::move(node), d.pos);
    }
    if (head == "else") parse_fail("else: not allowed here, because this is not a cond clause", d.pos);
    if (head == "this") parse_fail("this: cannot be applied as a function", d.pos);
    parse_fail(head + ": found a definition that is not at the top level", d.pos);
  }

  ExprPtr cond(const Datum& d, bool in_method) {
    if (d.items.size() < 2) parse_fail("cond: expected at least one clause", d.pos);
    ast::Cond node;
    for (std::size_t i = 1; i < d.items.size(); ++i) {
      const Datum& clause = d.items[i];
      if (clause.kind != Datum::Kind::list || clause.items.size() != 2 || has_dot(clause)) {
        parse_fail("cond: expected a clause with a question and an answer", clause.pos);
      }
      if (clause.items[0].is_identifier("else")) {
        if (i + 1 != d.items.size()) parse_fail("cond: found an else clause that isn't the last clause", clause.pos);
        node.else_result = expr(clause.items[1], in_method);
      } else {
        auto question = expr(clause.items[0], in_method);
        auto answer = expr(clause.items[1], in_method);
        node.clauses.push_back({std::move(question), std::move(answer)});
      }
    }
    return make_expr(std::move(node), d.pos);
  }

  Defn definition(const Datum& d) {
    if (d.items.size() != 3) parse_fail("define: expected a name and exactly one body expression", d.pos);
    const Datum& target = d.items[1];
    if (target.kind == Datum::Kind::list) {
      if (target.items.empty()) parse_fail("define: expected a function name", target.pos);
      FunctionDefn f;
      f.name = identifier(target.items[0], "a function name");
      Datum rest = target;
      rest.items.erase(rest.items.begin());
      f.params = params(rest, "define");
      f.body = expr(d.items[2], false);
      f.pos = d.pos;
      return f;
    }
    auto name = identifier(target, "a variable name");
    auto value = expr(d.items[2], false);
    return ConstantDefn{std::move(name), std::move(value), d.pos};
  }

  TestDefn test_form(const Datum& d) {
    const std::string& head = d.items[0].token.text;
    const std::size_t want = head == "check-expect" ? 3 : 4;
    if (d.items.size() != want) {
      parse_fail(head + ": expects " + std::to_string(want - 1) + " arguments", d.pos);
    }
    auto actual = expr(d.items[1], false);
    auto expected = expr(d.items[2], false);
    TestDefn t{std::move(actual), std::move(expected), nullptr, d.pos};
    if (want == 4) t.tolerance = expr(d.items[3], false);
    return t;
  }

  Defn test(const Datum& d) { return test_form(d); }

  Defn require(const Datum& d) {
    static const std::set<std::string, std::less<>> known = {"2htdp/image", "class/universe"};
    RequireDefn r{{}, d.pos};
    for (std::size_t i = 1; i < d.items.size(); ++i) {
      const Datum& lib = d.items[i];
      if (!lib.is_atom(TokenKind::identifier) || !known.count(lib.token.text)) {
        parse_fail("require: unknown library", lib.pos);
      }
      r.libraries.push_back(lib.token.text);
    }
    return r;
  }

  Defn class_definition(const Datum& d) {
    if (d.items.size() < 2) parse_fail("define-class: expected a class name", d.pos);
    ClassDefn c;
    c.name = identifier(d.items[1], "a class name");
    c.pos = d.pos;
    bool saw_fields = false;
    for (std::size_t i = 2; i < d.items.size(); ++i) {
      const Datum& clause = d.items[i];
      if (clause.kind != Datum::Kind::list || clause.items.empty() ||
          !clause.items[0].is_atom(TokenKind::identifier) || has_dot(clause)) {
        parse_fail("define-class: expected a fields, super, method, or test clause", clause.pos);
      }
      const std::string& head = clause.items[0].token.text;
      if (head == "fields") {
        if (saw_fields) parse_fail("define-class: duplicate fields clause", clause.pos);
        saw_fields = true;
        for (std::size_t k = 1; k < clause.items.size(); ++k) {
          std::string f = identifier(clause.items[k], "a field name");
          if (std::find(c.fields.begin(), c.fields.end(), f) != c.fields.end()) {
            parse_fail("define-class: duplicate field `" + f + "`", clause.items[k].pos);
          }
          c.fields.push_back(std::move(f));
        }
      } else if (head == "super") {
        if (!level_.allows_super()) throw LevelError("super classes", 2, clause.pos);
        if (c.super_name) parse_fail("define-class: duplicate super clause", clause.pos);
        if (clause.items.size() != 2) parse_fail("super: expected exactly one class name", clause.pos);
        c.super_name = identifier(clause.items[1], "a super class name");
      } else if (head == "constructor") {
        if (!level_.allows_constructors()) throw LevelError("constructors", 4, clause.pos);
        if (c.constructor) parse_fail("define-class: duplicate constructor", clause.pos);
        c.constructor = constructor(clause);
      } else if (head == "define") {
        c.members.push_back(method(clause));
      } else if (head == "check-expect" || head == "check-within") {
        c.members.push_back(test_form(clause));
      } else {
        parse_fail("define-class: unexpected clause `" + head + "`", clause.pos);
      }
    }
    return c;
  }

  MethodDefn method(const Datum& d) {
    if (d.items.size() != 3 || d.items[1].kind != Datum::Kind::list || d.items[1].items.empty()) {
      parse_fail("define-class: a method is written (define (name param ...) body)", d.pos);
    }
    const Datum& target = d.items[1];
    MethodDefn m;
    m.name = identifier(target.items[0], "a method name");
    Datum rest = target;
    rest.items.erase(rest.items.begin());
    m.params = params(rest, "method " + m.name);
    m.body = expr(d.items[2], true);
    m.pos = d.pos;
    return m;
  }

  ConstructorDefn constructor(const Datum& d) {
    if (d.items.size() != 3) {
      parse_fail("constructor: expected (constructor (param ...) (fields expr ...))", d.pos);
    }
    ConstructorDefn ctor;
    ctor.params = params(d.items[1], "constructor");
    const Datum& init = d.items[2];
    if (init.kind != Datum::Kind::list || init.items.empty() || !init.items[0].is_identifier("fields")) {
      parse_fail("constructor: expected (fields expr ...) after the parameters", init.pos);
    }
    for (std::size_t i = 1; i < init.items.size(); ++i) {
      ctor.initializers.push_back(expr(init.items[i], false));
    }
    ctor.pos = d.pos;
    return ctor;
  }

  LanguageLevel level_;
};

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void print_expr(std::ostream& os, const Expr& e);

void print_args(std::ostream& os, const std::vector<ExprPtr>& args) {
  for (const auto& a : args) {
    os << ' ';
    print_expr(os, *a);
  }
}

void print_names(std::ostream& os, const std::vector<std::string>& names) {
  os << '(';
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? " " : "") << names[i];
  os << ')';
}

void print_expr(std::ostream& os, const Expr& e) {
  std::visit(
      [&os](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::NumberLit>) {
          os << n.value.to_string();
        } else if constexpr (std::is_same_v<T, ast::BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, ast::StringLit>) {
          os << quote_string(n.value);
        } else if constexpr (std::is_same_v<T, ast::Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, ast::Lambda>) {
          os << "(lambda ";
          print_names(os, n.params);
          os << ' ';
          print_expr(os, *n.body);
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::Apply>) {
          os << '(';
          print_expr(os, *n.fn);
          print_args(os, n.args);
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::Cond>) {
          os << "(cond";
          for (const auto& c : n.clauses) {
            os << " [";
            print_expr(os, *c.test);
            os << ' ';
            print_expr(os, *c.result);
            os << ']';
          }
          if (n.else_result) {
            os << " [else ";
            print_expr(os, *n.else_result);
            os << ']';
          }
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::If>) {
          os << "(if";
          print_args(os, {n.test, n.then_branch, n.else_branch});
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::And>) {
          os << "(and";
          print_args(os, n.operands);
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::Or>) {
          os << "(or";
          print_args(os, n.operands);
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::New>) {
          os << "(new " << n.class_name;
          print_args(os, n.args);
          os << ')';
        } else if constexpr (std::is_same_v<T, ast::Send>) {
          os << "(send ";
          print_expr(os, *n.receiver);
          os << ' ' << n.message;
          print_args(os, n.args);
          os << ')';
        } else {
          os << "this";
        }
      },
      e.node);
}

void print_test(std::ostream& os, const TestDefn& t) {
  os << (t.tolerance ? "(check-within " : "(check-expect ");
  print_expr(os, *t.actual);
  os << ' ';
  print_expr(os, *t.expected);
  if (t.tolerance) {
    os << ' ';
    print_expr(os, *t.tolerance);
  }
  os << ')';
}

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::vector<Datum> read_data(const std::vector<Token>& tokens) {
  std::vector<Datum> top;
  std::vector<Datum> stack;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::lparen) {
      Datum d;
      d.kind = Datum::Kind::list;
      d.open = t.text[0];
      d.pos = t.pos;
      stack.push_back(std::move(d));
    } else if (t.kind == TokenKind::rparen) {
      if (stack.empty()) parse_fail("unexpected `" + t.text + "`", t.pos);
      char want = stack.back().open == '(' ? ')' : ']';
      if (t.text[0] != want) {
        parse_fail(std::string("expected `") + want + "` to close `" + stack.back().open +
                       "` opened at " + stack.back().pos.to_string(),
                   t.pos);
      }
      Datum done = std::move(stack.back());
      stack.pop_back();
      (stack.empty() ? top : stack.back().items).push_back(std::move(done));
    } else {
      Datum d;
      d.token = t;
      d.pos = t.pos;
      (stack.empty() ? top : stack.back().items).push_back(std::move(d));
    }
  }
  if (!stack.empty()) {
    parse_fail(std::string("unbalanced parentheses: missing `") +
                   (stack.back().open == '(' ? ')' : ']') + "` for `" + stack.back().open + "`",
               stack.back().pos);
  }
  return top;
}

namespace {

std::size_t header_line_span(std::string_view source, std::size_t& start) {
  start = source.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos || source.substr(start, 5) != "#lang") return 0;
  auto end = source.find('\n', start);
  if (end == std::string_view::npos) end = source.size();
  return end - start;
}

}  // namespace

std::optional<int> lang_header_level(std::string_view source) {
  std::size_t start = 0;
  std::size_t len = header_line_span(source, start);
  if (len == 0) return std::nullopt;
  std::istringstream line(std::string(source.substr(start + 5, len - 5)));
  std::string name;
  line >> name;
  const std::string prefix = "class/";
  if (name.size() == prefix.size() + 1 && name.compare(0, prefix.size(), prefix) == 0) {
    char d = name.back();
    if (d >= '0' && d <= '4') return d - '0';
  }
  throw Error(ErrorKind::parse, "#lang: expected class/0 through class/4, found `" + name + "`",
              SourcePos{1 + static_cast<int>(std::count(source.begin(), source.begin() + start, '\n')), 1});
}

std::string strip_lang_header(std::string_view source) {
  std::string out(source);
  std::size_t start = 0;
  std::size_t len = header_line_span(source, start);
  std::fill_n(out.begin() + start, len, ' ');
  return out;
}

Program parse_program(const std::vector<Token>& tokens, LanguageLevel level) {
  Parser parser(level);
  Program program;
  for (const Datum& d : read_data(tokens)) program.defns.push_back(parser.top_level(d));
  return program;
}

Program parse_source(std::string_view source, LanguageLevel level) {
  return parse_program(tokenize(strip_lang_header(source)), level);
}

ExprPtr parse_expression(std::string_view source, LanguageLevel level, bool in_method) {
  auto data = read_data(tokenize(source));
  if (data.size() != 1) {
    throw Error(ErrorKind::parse, "expected exactly one expression, found " + std::to_string(data.size()));
  }
  return Parser(level).expr(data[0], in_method);
}

ExprPtr desugar_dot(const Datum& form, LanguageLevel level, bool in_method) {
  return Parser(level).desugar(form, in_method);
}

std::string to_source(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

std::string to_source(const Program& program) {
  std::ostringstream os;
  for (const Defn& d : program.defns) {
    std::visit(
        [&os](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FunctionDefn>) {
            os << "(define (" << n.name;
            for (const auto& p : n.params) os << ' ' << p;
            os << ") ";
            print_expr(os, *n.body);
            os << ')';
          } else if constexpr (std::is_same_v<T, ConstantDefn>) {
            os << "(define " << n.name << ' ';
            print_expr(os, *n.value);
            os << ')';
          } else if constexpr (std::is_same_v<T, ClassDefn>) {
            os << "(define-class " << n.name;
            if (n.super_name) os << "\n  (super " << *n.super_name << ')';
            os << "\n  (fields";
            for (const auto& f : n.fields) os << ' ' << f;
            os << ')';
            for (const auto& member : n.members) {
              os << "\n  ";
              if (const auto* m = std::get_if<MethodDefn>(&member)) {
                os << "(define (" << m->name;
                for (const auto& p : m->params) os << ' ' << p;
                os << ") ";
                print_expr(os, *m->body);
                os << ')';
              } else {
                print_test(os, std::get<TestDefn>(member));
              }
            }
            if (n.constructor) {
              os << "\n  (constructor ";
              print_names(os, n.constructor->params);
              os << " (fields";
              print_args(os, n.constructor->initializers);
              os << "))";
            }
            os << ')';
          } else if constexpr (std::is_same_v<T, TestDefn>) {
            print_test(os, n);
          } else if constexpr (std::is_same_v<T, RequireDefn>) {
            os << "(require";
            for (const auto& lib : n.libraries) os << ' ' << lib;
            os << ')';
          } else if constexpr (std::is_same_v<T, BigBangDefn>) {
            os << "(big-bang ";
            print_expr(os, *n.initial_world);
            os << ')';
          } else {
            print_expr(os, *n.expr);
          }
        },
        d);
    os << '\n';
  }
  return os.str();
}

}  // namespace classlang
