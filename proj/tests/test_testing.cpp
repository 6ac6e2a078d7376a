#include <doctest.h>

#include "support.hpp"

using namespace classlang;

namespace {

TestReport report_for(std::string_view src, int level = 1) {
  return eval_program(parse_source(src, LanguageLevel(level)), LanguageLevel(level)).report;
}

}  // namespace

TEST_SUITE("tests") {

TEST_CASE("posn tests are lifted with their method origins") {
  auto cases = lift_tests(testsupport::corpus_program("posn.rkt"));
  REQUIRE(cases.size() == 3);
  CHECK(cases[0].origin.class_name == "posn");
  CHECK(cases[0].origin.method_name == "dist");
  CHECK(cases[1].origin.method_name == "dist-origin");
  CHECK(cases[2].origin.method_name == "dist-origin");
  CHECK(cases[0].pos < cases[1].pos);
  CHECK(cases[1].pos < cases[2].pos);
}

TEST_CASE("programs without tests") {
  CHECK(lift_tests(Program{}).empty());
  CHECK(lift_tests(testsupport::corpus_program("world.rkt")).empty());
}

TEST_CASE("a trailing class test belongs to the preceding method") {
  auto cases = lift_tests(parse_source(
      "(define-class a (fields x) (define (m) 1) (check-expect 1 1))", LanguageLevel(1)));
  REQUIRE(cases.size() == 1);
  CHECK(cases[0].origin.method_name == "m");
}

TEST_CASE("lifted and top-level tests interleave by position") {
  auto cases = lift_tests(parse_source("(check-expect 1 1)\n"
                                       "(define-class a (fields x) (check-expect 2 2) (define (m) 1))\n"
                                       "(check-expect 3 3)",
                                       LanguageLevel(1)));
  REQUIRE(cases.size() == 3);
  CHECK_FALSE(cases[0].origin.lifted());
  CHECK(cases[1].origin.lifted());
  CHECK_FALSE(cases[2].origin.lifted());
}

TEST_CASE("value_equal") {
  const char* src = "(define-class posn (fields x y))"
                    "(define-class leaf (fields v)) (define-class node (fields l v r))";
  auto eq = [&](std::string_view a, std::string_view b) {
    return value_equal(testsupport::eval_in(src, a, 1), testsupport::eval_in(src, b, 1));
  };
  CHECK(eq("(new posn 3 4)", "(new posn 3 4)"));
  CHECK_FALSE(eq("(new leaf 7)", "(new node (new leaf 1) 5 (new leaf 2))"));
  CHECK(eq("5", "(sqrt 25)"));
  CHECK(eq("5", "5.0"));
  CHECK(eq("(list 1 2)", "(list 1 2)"));
  CHECK_FALSE(eq("(list 1 2)", "(list 1)"));
  CHECK_FALSE(eq("\"1\"", "1"));
  CHECK_THROWS_WITH(eq("add1", "add1"), doctest::Contains("cannot compare functions"));
}

TEST_CASE("corpus reports") {
  CHECK(report_for(testsupport::slurp(testsupport::corpus("tree.rkt"))).summary() == "2 tests passed");
  CHECK(report_for(testsupport::slurp(testsupport::corpus("posn.rkt"))).summary() == "3 tests passed");
}

TEST_CASE("check-within") {
  TestReport r = report_for("(check-within 1.41 (sqrt 2) 0.01)");
  CHECK(r.passed == 1);
  CHECK(report_for("(check-within 1.41 (sqrt 2) 0.001)").failures.size() == 1);
  CHECK(report_for("(check-within 1 1 -1)").failures.size() == 1);
  CHECK(report_for("(check-within \"a\" \"a\" 1)").failures.size() == 1);
}

TEST_CASE("failures render as source") {
  TestReport r = report_for(
      "(define-class leaf (fields v) (define (sum) (this . v)))\n"
      "(check-expect ((new leaf 16) . sum) 17)\n"
      "(check-expect (new leaf 1) (new leaf 2))\n"
      "(check-expect (/ 1 0) 1)");
  CHECK(r.total == 3);
  CHECK(r.passed == 0);
  CHECK(r.total == r.passed + r.failures.size());
  CHECK(r.summary() == "Ran 3 tests, 3 failed");
  CHECK(r.failures[0].actual == "16");
  CHECK(r.failures[0].expected == "17");
  CHECK(r.failures[1].actual == "(new leaf 1)");
  CHECK(r.failures[2].error.find("division by zero") != std::string::npos);
  const std::string text = r.render();
  CHECK(text.find("2:1") != std::string::npos);
  CHECK(text.find("(new leaf 2)") != std::string::npos);
}

TEST_CASE("summaries") {
  CHECK(TestReport{}.summary() == "0 tests");
  CHECK(TestReport{1, 1, {}}.summary() == "1 test passed");
}

TEST_CASE("reports are deterministic") {
  const std::string src = testsupport::slurp(testsupport::corpus("posn.rkt")) + "\n(check-expect 1 2)";
  CHECK(report_for(src).render() == report_for(src).render());
}

TEST_CASE("load errors abort before tests") {
  CHECK_THROWS_AS(report_for("(check-expect 1 1) (define x (/ 1 0))"), Error);
}

}
