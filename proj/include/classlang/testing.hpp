#pragma once

#include <memory>
#include <string>
#include <vector>

#include "classlang/ast.hpp"
#include "classlang/interpreter.hpp"

namespace classlang {

// Where a test was written. Tests inside a class body are attributed to the
// method that follows them (the design-recipe order), or to the preceding
// method when they come last.
struct TestOrigin {
  std::string class_name;   // empty for top-level tests
  std::string method_name;  // empty when the class has no methods

  bool lifted() const { return !class_name.empty(); }
};

struct TestCase {
  ExprPtr actual;
  ExprPtr expected;
  ExprPtr tolerance;  // null for check-expect
  SourcePos pos;
  TestOrigin origin;
};

struct TestFailure {
  SourcePos pos;
  std::string actual;    // rendered value, empty on error
  std::string expected;  // rendered value, empty on error
  std::string error;     // evaluation error text, empty otherwise
  std::string tolerance; // check-within only
  bool within = false;   // check-within rather than check-expect
};

struct TestReport {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::vector<TestFailure> failures;

  bool all_passed() const { return failures.empty(); }
  // "2 tests passed", "1 test passed", "0 tests", "Ran 3 tests, 1 failed"
  std::string summary() const;
  // Summary followed by one block per failure.
  std::string render() const;
};

// All check-expect/check-within forms in source order, with class-body tests
// lifted to the top level.
std::vector<TestCase> lift_tests(const Program& program);

// Structural equality: numbers numerically across exactness, lists
// elementwise, objects by class and fields, scenes structurally.
// Throws a runtime error "cannot compare functions" when a closure or
// primitive is reached.
bool value_equal(const Value& a, const Value& b);

// Evaluates each case in the global environment. Evaluation errors are
// recorded as failures and do not stop the run.
TestReport run_tests(const std::vector<TestCase>& cases, Interpreter& interp);

// Loads `program` and runs its tests. Load errors propagate.
struct ProgramRun {
  std::unique_ptr<Interpreter> interpreter;
  LoadResult load;
  TestReport report;
};
ProgramRun eval_program(const Program& program, LanguageLevel level);

}  // namespace classlang
