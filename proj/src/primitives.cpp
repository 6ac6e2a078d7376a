#include "classlang/primitives.hpp"

#include <cmath>

#include "classlang/interpreter.hpp"
#include "classlang/testing.hpp"

namespace classlang {

namespace {

using Args = std::span<const Value>;

[[noreturn]] void type_error(const std::string& prim, const char* expected, std::size_t index,
                             const Value& given, SourcePos pos) {
  throw Error(ErrorKind::runtime,
              prim + ": expects " + expected + " as argument " + std::to_string(index + 1) +
                  ", given " + to_source(given),
              pos);
}

const Number& num(const std::string& prim, Args args, std::size_t i, SourcePos pos) {
  if (!args[i].is_number()) type_error(prim, "a number", i, args[i], pos);
  return args[i].as_number();
}

const ListValue& list(const std::string& prim, Args args, std::size_t i, SourcePos pos) {
  if (!args[i].is_list()) type_error(prim, "a list", i, args[i], pos);
  return args[i].as_list();
}

const std::string& str(const std::string& prim, Args args, std::size_t i, SourcePos pos) {
  if (!args[i].is_string()) type_error(prim, "a string", i, args[i], pos);
  return args[i].as_string();
}

const Scene& image(const std::string& prim, Args args, std::size_t i, SourcePos pos) {
  if (!args[i].is_scene()) type_error(prim, "an image", i, args[i], pos);
  return args[i].as_scene();
}

const Value& procedure(const std::string& prim, Args args, std::size_t i, SourcePos pos) {
  if (!args[i].is_procedure()) type_error(prim, "a function", i, args[i], pos);
  return args[i];
}

// Re-raises construction errors with the call position attached.
template <typename F>
Value at_pos(SourcePos pos, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.pos().known()) throw;
    throw Error(e.kind(), e.what(), pos);
  }
}

class Registry {
 public:
  void add(std::string name, std::size_t min, std::size_t max, Primitive::Fn fn) {
    auto prim = std::make_shared<const Primitive>(Primitive{name, min, max, std::move(fn)});
    table_.emplace(std::move(name), Value(PrimitiveRef(std::move(prim))));
  }
  void constant(std::string name, Value v) { table_.emplace(std::move(name), std::move(v)); }

  template <typename Op>
  void unary_number(const std::string& name, Op op) {
    add(name, 1, 1, [name, op](Interpreter&, Args a, const SourcePos& pos) -> Value {
      const Number& x = num(name, a, 0, pos);
      return at_pos(pos, [&] { return Value(op(x)); });
    });
  }

  template <typename Pred>
  void comparison(const std::string& name, Pred pred) {
    add(name, 2, Primitive::kVariadic, [name, pred](Interpreter&, Args a, const SourcePos& pos) -> Value {
      for (std::size_t i = 0; i < a.size(); ++i) num(name, a, i, pos);
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        if (!pred(a[i].as_number(), a[i + 1].as_number())) return false;
      }
      return true;
    });
  }

  template <typename Pred>
  void type_test(const std::string& name, Pred pred) {
    add(name, 1, 1, [pred](Interpreter&, Args a, const SourcePos&) -> Value { return pred(a[0]); });
  }

  std::unordered_map<std::string, Value> table_;
};

void add_numeric(Registry& r) {
  r.add("+", 0, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    Number sum(0);
    for (std::size_t i = 0; i < a.size(); ++i) sum = sum + num("+", a, i, pos);
    return sum;
  });
  r.add("*", 0, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    Number product(1);
    for (std::size_t i = 0; i < a.size(); ++i) product = product * num("*", a, i, pos);
    return product;
  });
  r.add("-", 1, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    if (a.size() == 1) return -num("-", a, 0, pos);
    Number out = num("-", a, 0, pos);
    for (std::size_t i = 1; i < a.size(); ++i) out = out - num("-", a, i, pos);
    return out;
  });
  r.add("/", 1, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return at_pos(pos, [&] {
      if (a.size() == 1) return Value(Number(1) / num("/", a, 0, pos));
      Number out = num("/", a, 0, pos);
      for (std::size_t i = 1; i < a.size(); ++i) out = out / num("/", a, i, pos);
      return Value(out);
    });
  });
  r.comparison("=", [](const Number& x, const Number& y) { return x == y; });
  r.comparison("<", [](const Number& x, const Number& y) { return x < y; });
  r.comparison(">", [](const Number& x, const Number& y) { return x > y; });
  r.comparison("<=", [](const Number& x, const Number& y) { return x <= y; });
  r.comparison(">=", [](const Number& x, const Number& y) { return x >= y; });

  r.unary_number("sqr", [](const Number& x) { return sqr(x); });
  r.unary_number("sqrt", [](const Number& x) { return sqrt(x); });
  r.unary_number("add1", [](const Number& x) { return x + Number(1); });
  r.unary_number("sub1", [](const Number& x) { return x - Number(1); });
  r.unary_number("abs", [](const Number& x) { return abs(x); });
  r.unary_number("exact->inexact", [](const Number& x) { return x.to_inexact(); });
  r.unary_number("inexact->exact", [](const Number& x) {
    if (x.is_exact()) return x;
    double d = x.to_double();
    if (!std::isfinite(d)) throw Error(ErrorKind::runtime, "inexact->exact: no exact representation");
    mpq_class q(d);
    return Number::exact(q.get_num(), q.get_den());
  });
  r.add("zero?", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return num("zero?", a, 0, pos).is_zero();
  });
  r.add("positive?", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return num("positive?", a, 0, pos).sign() > 0;
  });
  r.add("negative?", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return num("negative?", a, 0, pos).sign() < 0;
  });
  r.add("integer?", 1, 1, [](Interpreter&, Args a, const SourcePos&) -> Value {
    return a[0].is_number() && a[0].as_number().is_integer();
  });
  r.add("exact?", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return num("exact?", a, 0, pos).is_exact();
  });
  for (const char* name : {"even?", "odd?"}) {
    const bool want_even = std::string(name) == "even?";
    r.add(name, 1, 1, [name, want_even](Interpreter&, Args a, const SourcePos& pos) -> Value {
      return at_pos(pos, [&] {
        const Number& x = num(name, a, 0, pos);
        if (!x.is_integer()) throw Error(ErrorKind::runtime, std::string(name) + ": expects an integer");
        return Value(remainder(x, Number(2)).is_zero() == want_even);
      });
    });
  }
  for (const char* name : {"min", "max"}) {
    const bool is_min = std::string(name) == "min";
    r.add(name, 1, Primitive::kVariadic, [name, is_min](Interpreter&, Args a, const SourcePos& pos) -> Value {
      Number best = num(name, a, 0, pos);
      bool inexact = !best.is_exact();
      for (std::size_t i = 1; i < a.size(); ++i) {
        const Number& x = num(name, a, i, pos);
        inexact = inexact || !x.is_exact();
        if (is_min ? x < best : x > best) best = x;
      }
      return inexact ? best.to_inexact() : best;
    });
  }
  r.add("quotient", 2, 2, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return at_pos(pos, [&] { return Value(quotient(num("quotient", a, 0, pos), num("quotient", a, 1, pos))); });
  });
  r.add("remainder", 2, 2, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return at_pos(pos, [&] { return Value(remainder(num("remainder", a, 0, pos), num("remainder", a, 1, pos))); });
  });
}

void add_predicates(Registry& r) {
  r.type_test("number?", [](const Value& v) { return v.is_number(); });
  r.type_test("boolean?", [](const Value& v) { return v.is_boolean(); });
  r.type_test("string?", [](const Value& v) { return v.is_string(); });
  r.type_test("image?", [](const Value& v) { return v.is_scene(); });
  r.type_test("object?", [](const Value& v) { return v.is_object(); });
  r.type_test("procedure?", [](const Value& v) { return v.is_procedure(); });
  r.add("not", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    if (!a[0].is_boolean()) type_error("not", "a boolean", 0, a[0], pos);
    return !a[0].as_boolean();
  });
  r.add("equal?", 2, 2, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    return at_pos(pos, [&] { return Value(value_equal(a[0], a[1])); });
  });
  r.add("string=?", 2, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    for (std::size_t i = 0; i < a.size(); ++i) str("string=?", a, i, pos);
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      if (a[i].as_string() != a[i + 1].as_string()) return false;
    }
    return true;
  });
  r.add("string-append", 0, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) out += str("string-append", a, i, pos);
    return out;
  });
}

void add_lists(Registry& r) {
  r.constant("empty", ListValue{});
  r.add("cons", 2, 2, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    if (!a[1].is_list()) {
      throw Error(ErrorKind::runtime,
                  "cons: second argument must be a list, but received " + to_source(a[0]) + " and " +
                      to_source(a[1]),
                  pos);
    }
    return cons(a[0], a[1].as_list());
  });
  r.add("first", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    const ListValue& l = list("first", a, 0, pos);
    if (l.empty()) throw Error(ErrorKind::runtime, "first: expects a non-empty list; given: empty", pos);
    return l.cell->first;
  });
  r.add("rest", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    const ListValue& l = list("rest", a, 0, pos);
    if (l.empty()) throw Error(ErrorKind::runtime, "rest: expects a non-empty list; given: empty", pos);
    return l.cell->rest;
  });
  r.type_test("empty?", [](const Value& v) { return v.is_list() && v.as_list().empty(); });
  r.type_test("cons?", [](const Value& v) { return v.is_list() && !v.as_list().empty(); });
  r.type_test("list?", [](const Value& v) { return v.is_list(); });
  r.add("list", 0, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos&) -> Value {
    return make_list(a);
  });
  r.add("length", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    long n = 0;
    for (const ConsCell* c = list("length", a, 0, pos).cell.get(); c; c = c->rest.cell.get()) ++n;
    return n;
  });
  r.add("append", 0, Primitive::kVariadic, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    std::vector<Value> all;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto items = list_items(list("append", a, i, pos));
      all.insert(all.end(), items.begin(), items.end());
    }
    return make_list(all);
  });
  r.add("reverse", 1, 1, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    ListValue out;
    for (const ConsCell* c = list("reverse", a, 0, pos).cell.get(); c; c = c->rest.cell.get()) {
      out = cons(c->first, std::move(out));
    }
    return out;
  });
  r.add("map", 2, Primitive::kVariadic, [](Interpreter& in, Args a, const SourcePos& pos) -> Value {
    const Value& f = procedure("map", a, 0, pos);
    std::vector<std::vector<Value>> lists;
    for (std::size_t i = 1; i < a.size(); ++i) lists.push_back(list_items(list("map", a, i, pos)));
    for (const auto& l : lists) {
      if (l.size() != lists[0].size()) {
        throw Error(ErrorKind::runtime, "map: all lists must have the same size", pos);
      }
    }
    std::vector<Value> out;
    for (std::size_t k = 0; k < lists[0].size(); ++k) {
      std::vector<Value> args;
      for (const auto& l : lists) args.push_back(l[k]);
      out.push_back(in.apply(f, std::move(args), pos));
    }
    return make_list(out);
  });
  r.add("filter", 2, 2, [](Interpreter& in, Args a, const SourcePos& pos) -> Value {
    const Value& f = procedure("filter", a, 0, pos);
    std::vector<Value> out;
    for (const Value& x : list_items(list("filter", a, 1, pos))) {
      Value keep = in.apply(f, {x}, pos);
      if (!keep.is_boolean()) {
        throw Error(ErrorKind::runtime, "filter: expected a boolean from the predicate, given " + to_source(keep), pos);
      }
      if (keep.as_boolean()) out.push_back(x);
    }
    return make_list(out);
  });
  r.add("foldr", 3, 3, [](Interpreter& in, Args a, const SourcePos& pos) -> Value {
    const Value& f = procedure("foldr", a, 0, pos);
    auto items = list_items(list("foldr", a, 2, pos));
    Value acc = a[1];
    for (auto it = items.rbegin(); it != items.rend(); ++it) acc = in.apply(f, {*it, acc}, pos);
    return acc;
  });
  r.add("foldl", 3, 3, [](Interpreter& in, Args a, const SourcePos& pos) -> Value {
    const Value& f = procedure("foldl", a, 0, pos);
    Value acc = a[1];
    for (const Value& x : list_items(list("foldl", a, 2, pos))) acc = in.apply(f, {x, acc}, pos);
    return acc;
  });
  for (const char* name : {"andmap", "ormap"}) {
    const bool is_and = std::string(name) == "andmap";
    r.add(name, 2, 2, [name, is_and](Interpreter& in, Args a, const SourcePos& pos) -> Value {
      const Value& f = procedure(name, a, 0, pos);
      for (const Value& x : list_items(list(name, a, 1, pos))) {
        Value v = in.apply(f, {x}, pos);
        if (!v.is_boolean()) type_error(name, "a predicate returning booleans", 0, a[0], pos);
        if (v.as_boolean() != is_and) return !is_and;
      }
      return is_and;
    });
  }
}

void add_images(Registry& r) {
  r.add("circle", 3, 3, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    const Number& radius = num("circle", a, 0, pos);
    const std::string& mode = str("circle", a, 1, pos);
    const std::string& color = str("circle", a, 2, pos);
    return at_pos(pos, [&] { return Value(circle(radius, mode, color)); });
  });
  r.add("empty-scene", 2, 2, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    const Number& w = num("empty-scene", a, 0, pos);
    const Number& h = num("empty-scene", a, 1, pos);
    return at_pos(pos, [&] { return Value(empty_scene(w, h)); });
  });
  r.add("place-image", 4, 4, [](Interpreter&, Args a, const SourcePos& pos) -> Value {
    const Scene& img = image("place-image", a, 0, pos);
    const Number& x = num("place-image", a, 1, pos);
    const Number& y = num("place-image", a, 2, pos);
    const Scene& scene = image("place-image", a, 3, pos);
    return at_pos(pos, [&] { return Value(place_image(img, x, y, scene)); });
  });
}

}  // namespace

const std::unordered_map<std::string, Value>& builtins() {
  static const auto table = [] {
    Registry r;
    add_numeric(r);
    add_predicates(r);
    add_lists(r);
    add_images(r);
    return std::move(r.table_);
  }();
  return table;
}

}  // namespace classlang
