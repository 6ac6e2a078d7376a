#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "classlang/ast.hpp"
#include "classlang/classes.hpp"
#include "classlang/value.hpp"

namespace classlang {

struct PrintedValue {
  SourcePos pos;
  Value value;
};

struct LoadResult {
  std::vector<PrintedValue> printed;  // top-level expressions, in order
  ExprPtr big_bang;                   // the initial-world expression, if any
  SourcePos big_bang_pos;
};

// Strict, left-to-right, purely functional evaluator. One instance per
// program run; after load() the global frame and class table are frozen.
class Interpreter {
 public:
  explicit Interpreter(LanguageLevel level);

  LanguageLevel level() const { return level_; }

  // Processes definitions in source order: functions, constants, classes,
  // top-level expressions. Tests are not run here.
  LoadResult load(const Program& program);

  Value eval(const Expr& e, const EnvPtr& env = nullptr);
  Value apply(const Value& fn, std::vector<Value> args, SourcePos pos = {});

  Value instantiate(const std::string& class_name, std::vector<Value> args, SourcePos pos = {});
  // Field messages answer the field; otherwise the most-derived method runs
  // with `this` bound to the receiver.
  Value send(const Value& receiver, const std::string& message, std::vector<Value> args,
             SourcePos pos = {});
  // True when the receiver is an object whose class chain has a field or
  // method called `message`.
  bool understands(const Value& receiver, const std::string& message) const;

  const ClassTable& classes() const { return classes_; }
  const Environment& globals() const { return *globals_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  const Value& lookup(const std::string& name, const EnvPtr& env, SourcePos pos) const;
  void define_global(const std::string& name, Value value, SourcePos pos);

  LanguageLevel level_;
  std::shared_ptr<Environment> globals_;
  ClassTable classes_;
  std::vector<std::string> warnings_;
};

// Runs `fn` on a thread with a large stack and rethrows its exception.
// Deep recursion in student programs is bounded by stack space; evaluation
// reports "recursion too deep" before the stack is exhausted.
void run_with_large_stack(const std::function<void()>& fn, std::size_t bytes = 1u << 30);

}  // namespace classlang
