#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "classlang/error.hpp"
#include "classlang/number.hpp"

namespace classlang {

// Level 0 through 4, each adding one feature to the previous:
// classes and objects, dot notation, super classes, overriding, constructors.
class LanguageLevel {
 public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 4;

  // Throws std::out_of_range outside 0..4.
  explicit LanguageLevel(int value);

  int value() const { return value_; }
  bool allows_dot_notation() const { return value_ >= 1; }
  bool allows_super() const { return value_ >= 2; }
  bool allows_overriding() const { return value_ >= 3; }
  bool allows_constructors() const { return value_ >= 4; }

  friend auto operator<=>(const LanguageLevel&, const LanguageLevel&) = default;

 private:
  int value_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {

struct NumberLit {
  Number value;
};
struct BoolLit {
  bool value;
};
struct StringLit {
  std::string value;
};
struct Var {
  std::string name;
};
struct Lambda {
  std::vector<std::string> params;
  ExprPtr body;
};
struct Apply {
  ExprPtr fn;
  std::vector<ExprPtr> args;
};
struct CondClause {
  ExprPtr test;
  ExprPtr result;
};
struct Cond {
  std::vector<CondClause> clauses;
  ExprPtr else_result;  // may be null
};
struct If {
  ExprPtr test;
  ExprPtr then_branch;
  ExprPtr else_branch;
};
struct And {
  std::vector<ExprPtr> operands;
};
struct Or {
  std::vector<ExprPtr> operands;
};
struct New {
  std::string class_name;
  std::vector<ExprPtr> args;
};
struct Send {
  ExprPtr receiver;
  std::string message;
  std::vector<ExprPtr> args;
};
struct This {};

}  // namespace ast

struct Expr {
  using Node = std::variant<ast::NumberLit, ast::BoolLit, ast::StringLit, ast::Var, ast::Lambda,
                            ast::Apply, ast::Cond, ast::If, ast::And, ast::Or, ast::New,
                            ast::Send, ast::This>;
  Node node;
  SourcePos pos;
};

template <typename T>
ExprPtr make_expr(T node, SourcePos pos = {}) {
  return std::make_shared<const Expr>(Expr{Expr::Node(std::move(node)), pos});
}

// Structural equality ignoring source positions.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

struct TestDefn {
  ExprPtr actual;
  ExprPtr expected;
  ExprPtr tolerance;  // null for check-expect
  SourcePos pos;
};

struct MethodDefn {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  SourcePos pos;
};

struct ConstructorDefn {
  std::vector<std::string> params;
  std::vector<ExprPtr> initializers;  // one per field of the full inherited chain
  SourcePos pos;
};

// A class body item in source order; tests and methods interleave.
using ClassMember = std::variant<MethodDefn, TestDefn>;

struct ClassDefn {
  std::string name;
  std::optional<std::string> super_name;
  std::vector<std::string> fields;
  std::vector<ClassMember> members;
  std::optional<ConstructorDefn> constructor;
  SourcePos pos;

  std::vector<const MethodDefn*> methods() const;
};

struct FunctionDefn {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  SourcePos pos;
};

struct ConstantDefn {
  std::string name;
  ExprPtr value;
  SourcePos pos;
};

struct RequireDefn {
  std::vector<std::string> libraries;
  SourcePos pos;
};

struct BigBangDefn {
  ExprPtr initial_world;
  SourcePos pos;
};

struct TopExpr {
  ExprPtr expr;
  SourcePos pos;
};

using Defn = std::variant<FunctionDefn, ConstantDefn, ClassDefn, TestDefn, RequireDefn,
                          BigBangDefn, TopExpr>;

struct Program {
  std::vector<Defn> defns;
};

bool structurally_equal(const Program& a, const Program& b);

}  // namespace classlang
