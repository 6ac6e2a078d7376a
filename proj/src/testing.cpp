#include "classlang/testing.hpp"

#include <sstream>

namespace classlang {

std::string TestReport::summary() const {
  if (total == 0) return "0 tests";
  if (failures.empty()) return std::to_string(total) + (total == 1 ? " test passed" : " tests passed");
  return "Ran " + std::to_string(total) + (total == 1 ? " test" : " tests") + ", " +
         std::to_string(failures.size()) + " failed";
}

std::string TestReport::render() const {
  std::ostringstream os;
  os << summary() << '\n';
  for (const auto& f : failures) {
    os << (f.within ? "check-within" : "check-expect") << " failure at "
       << f.pos.to_string() << '\n';
    if (!f.error.empty()) {
      os << "  error:    " << f.error << '\n';
      continue;
    }
    os << "  actual:   " << f.actual << '\n';
    os << "  expected: " << f.expected << '\n';
    if (!f.tolerance.empty()) os << "  within:   " << f.tolerance << '\n';
  }
  return os.str();
}

std::vector<TestCase> lift_tests(const Program& program) {
  std::vector<TestCase> out;
  for (const Defn& d : program.defns) {
    if (const auto* t = std::get_if<TestDefn>(&d)) {
      out.push_back({t->actual, t->expected, t->tolerance, t->pos, {}});
      continue;
    }
    const auto* c = std::get_if<ClassDefn>(&d);
    if (c == nullptr) continue;
    const std::size_t first = out.size();
    std::size_t pending = first;
    std::string last_method;
    for (const auto& member : c->members) {
      if (const auto* t = std::get_if<TestDefn>(&member)) {
        out.push_back({t->actual, t->expected, t->tolerance, t->pos, {c->name, ""}});
      } else {
        last_method = std::get<MethodDefn>(member).name;
        for (; pending < out.size(); ++pending) out[pending].origin.method_name = last_method;
      }
    }
    for (; pending < out.size(); ++pending) out[pending].origin.method_name = last_method;
  }
  return out;
}

bool value_equal(const Value& a, const Value& b) {
  if (a.is_procedure() || b.is_procedure()) {
    throw Error(ErrorKind::runtime, "cannot compare functions");
  }
  if (a.data().index() != b.data().index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.data());
        if constexpr (std::is_same_v<T, ListValue>) {
          const ConsCell* p = x.cell.get();
          const ConsCell* q = y.cell.get();
          for (; p != nullptr && q != nullptr; p = p->rest.cell.get(), q = q->rest.cell.get()) {
            if (!value_equal(p->first, q->first)) return false;
          }
          return p == nullptr && q == nullptr;
        } else if constexpr (std::is_same_v<T, ObjectRef>) {
          if (x->class_name != y->class_name || x->fields.size() != y->fields.size()) return false;
          for (std::size_t i = 0; i < x->fields.size(); ++i) {
            if (!value_equal(x->fields[i], y->fields[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Scene>) {
          return scene_equal(x, y);
        } else if constexpr (std::is_same_v<T, ClosureRef> || std::is_same_v<T, PrimitiveRef>) {
          return false;
        } else {
          return x == y;
        }
      },
      a.data());
}

TestReport run_tests(const std::vector<TestCase>& cases, Interpreter& interp) {
  TestReport report;
  for (const TestCase& tc : cases) {
    ++report.total;
    TestFailure failure{tc.pos, "", "", "", "", tc.tolerance != nullptr};
    try {
      Value actual = interp.eval(*tc.actual);
      Value expected = interp.eval(*tc.expected);
      bool ok = false;
      if (tc.tolerance) {
        Value tol = interp.eval(*tc.tolerance);
        failure.tolerance = to_source(tol);
        if (!tol.is_number() || tol.as_number().sign() < 0) {
          throw Error(ErrorKind::runtime, "check-within: tolerance must be a non-negative number, given " +
                                              to_source(tol), tc.tolerance->pos);
        }
        if (!actual.is_number() || !expected.is_number()) {
          throw Error(ErrorKind::runtime, "check-within: expects numbers, given " + to_source(actual) +
                                              " and " + to_source(expected), tc.pos);
        }
        ok = abs(actual.as_number() - expected.as_number()) <= tol.as_number();
      } else {
        ok = value_equal(actual, expected);
      }
      if (ok) {
        ++report.passed;
        continue;
      }
      failure.actual = to_source(actual);
      failure.expected = to_source(expected);
    } catch (const Error& e) {
      failure.error = e.describe();
    }
    report.failures.push_back(std::move(failure));
  }
  return report;
}

ProgramRun eval_program(const Program& program, LanguageLevel level) {
  ProgramRun run;
  run.interpreter = std::make_unique<Interpreter>(level);
  run.load = run.interpreter->load(program);
  run.report = run_tests(lift_tests(program), *run.interpreter);
  return run;
}

}  // namespace classlang
