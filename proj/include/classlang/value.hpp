#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "classlang/ast.hpp"
#include "classlang/number.hpp"
#include "classlang/scene.hpp"

namespace classlang {

class Interpreter;
class Environment;
struct ConsCell;
struct Closure;
struct Primitive;
struct ObjectData;

using EnvPtr = std::shared_ptr<const Environment>;

// Proper list; a null cell is the empty list.
struct ListValue {
  std::shared_ptr<const ConsCell> cell;

  bool empty() const { return cell == nullptr; }
};

using ClosureRef = std::shared_ptr<const Closure>;
using PrimitiveRef = std::shared_ptr<const Primitive>;
using ObjectRef = std::shared_ptr<const ObjectData>;

class Value {
 public:
  using Data = std::variant<Number, bool, std::string, ListValue, ClosureRef, PrimitiveRef,
                            ObjectRef, Scene>;

  Value() : data_(Number(0)) {}
  Value(Number n) : data_(std::move(n)) {}          // NOLINT(google-explicit-constructor)
  Value(int n) : data_(Number(n)) {}                 // NOLINT(google-explicit-constructor)
  Value(long n) : data_(Number(n)) {}                // NOLINT(google-explicit-constructor)
  Value(bool b) : data_(b) {}                        // NOLINT(google-explicit-constructor)
  Value(const char* s) : data_(std::string(s)) {}    // NOLINT(google-explicit-constructor)
  Value(std::string s) : data_(std::move(s)) {}      // NOLINT(google-explicit-constructor)
  Value(ListValue l) : data_(std::move(l)) {}        // NOLINT(google-explicit-constructor)
  Value(ClosureRef c) : data_(std::move(c)) {}       // NOLINT(google-explicit-constructor)
  Value(PrimitiveRef p) : data_(std::move(p)) {}     // NOLINT(google-explicit-constructor)
  Value(ObjectRef o) : data_(std::move(o)) {}        // NOLINT(google-explicit-constructor)
  Value(Scene s) : data_(std::move(s)) {}            // NOLINT(google-explicit-constructor)

  const Data& data() const { return data_; }

  bool is_number() const { return std::holds_alternative<Number>(data_); }
  bool is_boolean() const { return std::holds_alternative<bool>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_list() const { return std::holds_alternative<ListValue>(data_); }
  bool is_object() const { return std::holds_alternative<ObjectRef>(data_); }
  bool is_scene() const { return std::holds_alternative<Scene>(data_); }
  bool is_procedure() const {
    return std::holds_alternative<ClosureRef>(data_) || std::holds_alternative<PrimitiveRef>(data_);
  }

  const Number& as_number() const { return std::get<Number>(data_); }
  bool as_boolean() const { return std::get<bool>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const ListValue& as_list() const { return std::get<ListValue>(data_); }
  const ObjectRef& as_object() const { return std::get<ObjectRef>(data_); }
  const Scene& as_scene() const { return std::get<Scene>(data_); }

  // "number", "boolean", "string", "list", "function", "object", "image"
  const char* type_name() const;

 private:
  Data data_;
};

struct ConsCell {
  Value first;
  ListValue rest;

  ConsCell(Value f, ListValue r) : first(std::move(f)), rest(std::move(r)) {}
  ~ConsCell();  // unlinks long tails iteratively
};

ListValue cons(Value first, ListValue rest);
ListValue make_list(std::span<const Value> items);
std::vector<Value> list_items(const ListValue& list);

struct Closure {
  std::string name;  // empty for anonymous lambdas
  std::vector<std::string> params;
  ExprPtr body;
  EnvPtr env;
};

struct Primitive {
  using Fn = std::function<Value(Interpreter&, std::span<const Value>, const SourcePos&)>;
  std::string name;
  std::size_t min_arity;
  std::size_t max_arity;  // kVariadic for no upper bound
  Fn fn;

  static constexpr std::size_t kVariadic = static_cast<std::size_t>(-1);
};

struct ObjectData {
  std::string class_name;
  std::vector<Value> fields;  // inherited fields first, then own
};

// Lexical frames. Local frames chain through their parents and never reach
// the global frame; the interpreter falls back to globals itself, which
// keeps top-level closures from owning the frame that owns them. The
// global frame grows as top-level definitions are processed; a binding,
// once made, is never changed.
class Environment {
 public:
  static std::shared_ptr<Environment> make_global();
  // `parent` may be null (a frame directly below the globals).
  static EnvPtr extend(const EnvPtr& parent, const std::vector<std::string>& names,
                       std::vector<Value> values);

  const Value* lookup(const std::string& name) const;
  bool is_global() const { return global_; }
  bool has_own(const std::string& name) const;
  // Global frame only. Throws a definition error on a duplicate name.
  void define(const std::string& name, Value value, SourcePos pos = {});

  const std::unordered_map<std::string, Value>& globals() const { return globals_; }

  // Structural hash of every binding reachable from this frame.
  std::size_t structural_hash() const;

 private:
  std::unordered_map<std::string, Value> globals_;
  std::vector<std::pair<std::string, Value>> locals_;
  EnvPtr parent_;
  bool global_ = false;
};

// Structural hash; closures hash by their code, objects by class and fields.
std::size_t hash_value(const Value& v);

// Printed form: numbers as literals, objects as (new C v ...), lists as
// (list v ...), images as their constructor expressions.
std::string to_source(const Value& v);

}  // namespace classlang
