#include "classlang/ast.hpp"

#include <stdexcept>

namespace classlang {

LanguageLevel::LanguageLevel(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw std::out_of_range("language level must be between 0 and 4, got " +
                            std::to_string(value));
  }
}

std::vector<const MethodDefn*> ClassDefn::methods() const {
  std::vector<const MethodDefn*> out;
  for (const auto& member : members) {
    if (const auto* m = std::get_if<MethodDefn>(&member)) out.push_back(m);
  }
  return out;
}

namespace {

bool equal_all(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

struct NodeEqual {
  const Expr::Node& other;

  bool operator()(const ast::NumberLit& a) const {
    return std::get<ast::NumberLit>(other).value.identical(a.value);
  }
  bool operator()(const ast::BoolLit& a) const { return std::get<ast::BoolLit>(other).value == a.value; }
  bool operator()(const ast::StringLit& a) const {
    return std::get<ast::StringLit>(other).value == a.value;
  }
  bool operator()(const ast::Var& a) const { return std::get<ast::Var>(other).name == a.name; }
  bool operator()(const ast::Lambda& a) const {
    const auto& b = std::get<ast::Lambda>(other);
    return a.params == b.params && structurally_equal(a.body, b.body);
  }
  bool operator()(const ast::Apply& a) const {
    const auto& b = std::get<ast::Apply>(other);
    return structurally_equal(a.fn, b.fn) && equal_all(a.args, b.args);
  }
  bool operator()(const ast::Cond& a) const {
    const auto& b = std::get<ast::Cond>(other);
    if (a.clauses.size() != b.clauses.size()) return false;
    for (std::size_t i = 0; i < a.clauses.size(); ++i) {
      if (!structurally_equal(a.clauses[i].test, b.clauses[i].test) ||
          !structurally_equal(a.clauses[i].result, b.clauses[i].result)) {
        return false;
      }
    }
    return structurally_equal(a.else_result, b.else_result);
  }
  bool operator()(const ast::If& a) const {
    const auto& b = std::get<ast::If>(other);
    return structurally_equal(a.test, b.test) && structurally_equal(a.then_branch, b.then_branch) &&
           structurally_equal(a.else_branch, b.else_branch);
  }
  bool operator()(const ast::And& a) const {
    return equal_all(a.operands, std::get<ast::And>(other).operands);
  }
  bool operator()(const ast::Or& a) const {
    return equal_all(a.operands, std::get<ast::Or>(other).operands);
  }
  bool operator()(const ast::New& a) const {
    const auto& b = std::get<ast::New>(other);
    return a.class_name == b.class_name && equal_all(a.args, b.args);
  }
  bool operator()(const ast::Send& a) const {
    const auto& b = std::get<ast::Send>(other);
    return a.message == b.message && structurally_equal(a.receiver, b.receiver) &&
           equal_all(a.args, b.args);
  }
  bool operator()(const ast::This&) const { return true; }
};

bool tests_equal(const TestDefn& a, const TestDefn& b) {
  return structurally_equal(a.actual, b.actual) && structurally_equal(a.expected, b.expected) &&
         structurally_equal(a.tolerance, b.tolerance);
}

bool members_equal(const ClassMember& a, const ClassMember& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ma = std::get_if<MethodDefn>(&a)) {
    const auto& mb = std::get<MethodDefn>(b);
    return ma->name == mb.name && ma->params == mb.params && structurally_equal(ma->body, mb.body);
  }
  return tests_equal(std::get<TestDefn>(a), std::get<TestDefn>(b));
}

bool classes_equal(const ClassDefn& a, const ClassDefn& b) {
  if (a.name != b.name || a.super_name != b.super_name || a.fields != b.fields) return false;
  if (a.members.size() != b.members.size()) return false;
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    if (!members_equal(a.members[i], b.members[i])) return false;
  }
  if (a.constructor.has_value() != b.constructor.has_value()) return false;
  if (a.constructor) {
    return a.constructor->params == b.constructor->params &&
           equal_all(a.constructor->initializers, b.constructor->initializers);
  }
  return true;
}

struct DefnEqual {
  const Defn& other;

  bool operator()(const FunctionDefn& a) const {
    const auto& b = std::get<FunctionDefn>(other);
    return a.name == b.name && a.params == b.params && structurally_equal(a.body, b.body);
  }
  bool operator()(const ConstantDefn& a) const {
    const auto& b = std::get<ConstantDefn>(other);
    return a.name == b.name && structurally_equal(a.value, b.value);
  }
  bool operator()(const ClassDefn& a) const { return classes_equal(a, std::get<ClassDefn>(other)); }
  bool operator()(const TestDefn& a) const { return tests_equal(a, std::get<TestDefn>(other)); }
  bool operator()(const RequireDefn& a) const {
    return a.libraries == std::get<RequireDefn>(other).libraries;
  }
  bool operator()(const BigBangDefn& a) const {
    return structurally_equal(a.initial_world, std::get<BigBangDefn>(other).initial_world);
  }
  bool operator()(const TopExpr& a) const {
    return structurally_equal(a.expr, std::get<TopExpr>(other).expr);
  }
};

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(NodeEqual{b.node}, a.node);
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.defns.size() != b.defns.size()) return false;
  for (std::size_t i = 0; i < a.defns.size(); ++i) {
    if (a.defns[i].index() != b.defns[i].index()) return false;
    if (!std::visit(DefnEqual{b.defns[i]}, a.defns[i])) return false;
  }
  return true;
}

}  // namespace classlang
