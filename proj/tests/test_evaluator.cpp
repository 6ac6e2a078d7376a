#include <doctest.h>

#include "support.hpp"

using namespace classlang;
using testsupport::eval_in;
using testsupport::eval_print;

TEST_SUITE("evaluator") {

TEST_CASE("examples") {
  CHECK(eval_print("(+ (sqr 3) (sqr 4))") == "25");
  CHECK(eval_print("(if true 1 2)") == "1");
  CHECK(eval_print("((lambda (f x) (f (f x))) add1 0)") == "2");
}

TEST_CASE("list primitives") {
  CHECK(eval_print("(map add1 (cons 1 (cons 2 empty)))") == "(list 2 3)");
  CHECK(eval_print("(length empty)") == "0");
  CHECK(eval_print("(foldr + 0 (cons 1 (cons 5 (cons 10 empty))))") == "16");
  CHECK(eval_print("(foldl cons empty (list 1 2 3))") == "(list 3 2 1)");
  CHECK(eval_print("(filter even? (list 1 2 3 4))") == "(list 2 4)");
  CHECK(eval_print("(map (lambda (x) (* x x)) (list 1 2 3))") == "(list 1 4 9)");
  CHECK(eval_print("(empty? empty)") == "true");
  CHECK(eval_print("(cons? (list 1))") == "true");
  CHECK(eval_print("(rest (list 1))") == "empty");
  CHECK_THROWS_WITH(eval_print("(first empty)"), doctest::Contains("first"));
  CHECK_THROWS_AS(eval_print("(rest empty)"), Error);
  CHECK_THROWS_AS(eval_print("(cons 1 2)"), Error);
}

TEST_CASE("conditionals") {
  CHECK(eval_print("(cond [(= 1 2) 10] [(= 1 1) 20])") == "20");
  CHECK(eval_print("(cond [false 1] [else 2])") == "2");
  CHECK_THROWS_WITH(eval_print("(cond [(= 1 2) 10])"),
                    doctest::Contains("cond: all question results were false"));
  CHECK(eval_print("(and true false)") == "false");
  CHECK(eval_print("(or false true)") == "true");
  CHECK(eval_print("(and false (/ 1 0))") == "false");
  CHECK_THROWS_AS(eval_print("(if 1 2 3)"), Error);
}

TEST_CASE("runtime errors") {
  CHECK_THROWS_WITH(eval_print("(+ y 1)"), doctest::Contains("y: this variable is not defined"));
  CHECK_THROWS_AS(eval_print("(1 2)"), Error);
  CHECK_THROWS_AS(eval_print("((lambda (x) x) 1 2)"), Error);
  CHECK_THROWS_AS(eval_print("(+ 1 \"a\")"), Error);
  CHECK_THROWS_AS(eval_print("(add1 true)"), Error);
}

TEST_CASE("definitions and closures") {
  const char* src =
      "(define (compose f g) (lambda (x) (f (g x))))\n"
      "(define twice (compose add1 add1))\n"
      "(define (fact n) (if (zero? n) 1 (* n (fact (sub1 n)))))";
  CHECK(to_source(eval_in(src, "(twice 5)")) == "7");
  CHECK(to_source(eval_in(src, "(fact 25)")) == "15511210043330985984000000");
}

TEST_CASE("duplicate top-level names") {
  CHECK_THROWS_WITH(eval_in("(define x 1) (define x 2)", "x"), doctest::Contains("x"));
  try {
    eval_in("(define x 1) (define (x) 2)", "x");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::definition);
  }
}

TEST_CASE("shadowing a primitive warns") {
  LanguageLevel lvl(1);
  Interpreter interp(lvl);
  interp.load(parse_source("(define (add1 x) (+ x 2))", lvl));
  CHECK(interp.warnings().size() == 1);
  CHECK(to_source(interp.eval(*parse_expression("(add1 1)", lvl))) == "3");
}

TEST_CASE("strings and booleans") {
  CHECK(eval_print("(string-append \"a\" \"b\")") == "\"ab\"");
  CHECK(eval_print("(string=? \"a\" \"a\")") == "true");
  CHECK(eval_print("(not false)") == "true");
  CHECK(eval_print("(equal? (list 1 2) (list 1 2))") == "true");
}

TEST_CASE("top-level expressions print in order") {
  LanguageLevel lvl(1);
  Interpreter interp(lvl);
  LoadResult r = interp.load(parse_source("(define x 2) (+ x 1) \"hi\" (list)", lvl));
  REQUIRE(r.printed.size() == 3);
  CHECK(to_source(r.printed[0].value) == "3");
  CHECK(to_source(r.printed[1].value) == "\"hi\"");
  CHECK(to_source(r.printed[2].value) == "empty");
}

TEST_CASE("evaluating twice gives equal values") {
  LanguageLevel lvl(1);
  Interpreter interp(lvl);
  interp.load(testsupport::corpus_program("tree.rkt"));
  for (const TestCase& t : lift_tests(testsupport::corpus_program("tree.rkt"))) {
    CHECK(value_equal(interp.eval(*t.actual), interp.eval(*t.actual)));
  }
}

TEST_CASE("empty program") {
  ProgramRun run = eval_program(Program{}, LanguageLevel(1));
  CHECK(run.interpreter->globals().globals().empty());
  CHECK(run.report.total == 0);
}

}
