#include "classlang/interpreter.hpp"

#include <pthread.h>

#include <cstdint>
#include <exception>

#include "classlang/primitives.hpp"

namespace classlang {

namespace {

// Headroom left on the stack for error construction and unwinding.
constexpr std::uintptr_t kStackReserve = 256 * 1024;

std::uintptr_t stack_floor() {
  thread_local const std::uintptr_t floor = [] {
    pthread_attr_t attr;
    void* addr = nullptr;
    std::size_t size = 0;
    if (pthread_getattr_np(pthread_self(), &attr) != 0) return std::uintptr_t{0};
    pthread_attr_getstack(&attr, &addr, &size);
    pthread_attr_destroy(&attr);
    return reinterpret_cast<std::uintptr_t>(addr) + kStackReserve;
  }();
  return floor;
}

void check_stack(SourcePos pos) {
  auto here = reinterpret_cast<std::uintptr_t>(__builtin_frame_address(0));
  if (here < stack_floor()) throw Error(ErrorKind::runtime, "recursion too deep", pos);
}

[[noreturn]] void runtime_error(const std::string& message, SourcePos pos) {
  throw Error(ErrorKind::runtime, message, pos);
}

std::string plural(std::size_t n, const char* word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

bool truth(const Value& v, const char* form, SourcePos pos) {
  if (!v.is_boolean()) {
    runtime_error(std::string(form) + ": question result is not true or false: " + to_source(v), pos);
  }
  return v.as_boolean();
}

}  // namespace

Interpreter::Interpreter(LanguageLevel level)
    : level_(level), globals_(Environment::make_global()) {}

void Interpreter::define_global(const std::string& name, Value value, SourcePos pos) {
  if (builtins().count(name)) {
    warnings_.push_back(pos.to_string() + ": warning: definition of `" + name +
                        "` shadows a built-in");
  }
  globals_->define(name, std::move(value), pos);
}

LoadResult Interpreter::load(const Program& program) {
  LoadResult result;
  for (const Defn& d : program.defns) {
    if (const auto* f = std::get_if<FunctionDefn>(&d)) {
      auto closure = std::make_shared<const Closure>(Closure{f->name, f->params, f->body, nullptr});
      define_global(f->name, Value(ClosureRef(closure)), f->pos);
    } else if (const auto* c = std::get_if<ConstantDefn>(&d)) {
      Value v = eval(*c->value);
      define_global(c->name, std::move(v), c->pos);
    } else if (const auto* k = std::get_if<ClassDefn>(&d)) {
      classes_ = classes_.with(*k, level_);
    } else if (const auto* b = std::get_if<BigBangDefn>(&d)) {
      if (result.big_bang) {
        throw Error(ErrorKind::definition, "big-bang: a program has at most one big-bang form", b->pos);
      }
      result.big_bang = b->initial_world;
      result.big_bang_pos = b->pos;
    } else if (const auto* t = std::get_if<TopExpr>(&d)) {
      result.printed.push_back({t->pos, eval(*t->expr)});
    }
  }
  return result;
}

const Value& Interpreter::lookup(const std::string& name, const EnvPtr& env, SourcePos pos) const {
  if (env) {
    if (const Value* v = env->lookup(name)) return *v;
  }
  if (const Value* v = globals_->lookup(name)) return *v;
  const auto& prims = builtins();
  if (auto it = prims.find(name); it != prims.end()) return it->second;
  runtime_error(name + ": this variable is not defined", pos);
}

Value Interpreter::eval(const Expr& e, const EnvPtr& env) {
  check_stack(e.pos);
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::NumberLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ast::BoolLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ast::StringLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ast::Var>) {
          return lookup(n.name, env, e.pos);
        } else if constexpr (std::is_same_v<T, ast::Lambda>) {
          return ClosureRef(std::make_shared<const Closure>(Closure{"", n.params, n.body, env}));
        } else if constexpr (std::is_same_v<T, ast::Apply>) {
          Value fn = eval(*n.fn, env);
          std::vector<Value> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(eval(*a, env));
          return apply(fn, std::move(args), e.pos);
        } else if constexpr (std::is_same_v<T, ast::Cond>) {
          for (const auto& clause : n.clauses) {
            if (truth(eval(*clause.test, env), "cond", clause.test->pos)) return eval(*clause.result, env);
          }
          if (n.else_result) return eval(*n.else_result, env);
          runtime_error("cond: all question results were false", e.pos);
        } else if constexpr (std::is_same_v<T, ast::If>) {
          if (truth(eval(*n.test, env), "if", n.test->pos)) return eval(*n.then_branch, env);
          return eval(*n.else_branch, env);
        } else if constexpr (std::is_same_v<T, ast::And>) {
          for (const auto& op : n.operands) {
            if (!truth(eval(*op, env), "and", op->pos)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ast::Or>) {
          for (const auto& op : n.operands) {
            if (truth(eval(*op, env), "or", op->pos)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, ast::New>) {
          std::vector<Value> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(eval(*a, env));
          return instantiate(n.class_name, std::move(args), e.pos);
        } else if constexpr (std::is_same_v<T, ast::Send>) {
          Value receiver = eval(*n.receiver, env);
          std::vector<Value> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(eval(*a, env));
          return send(receiver, n.message, std::move(args), e.pos);
        } else {
          if (env) {
            if (const Value* self = env->lookup("this")) return *self;
          }
          runtime_error("this: allowed only inside a method body", e.pos);
        }
      },
      e.node);
}

Value Interpreter::apply(const Value& fn, std::vector<Value> args, SourcePos pos) {
  if (const auto* c = std::get_if<ClosureRef>(&fn.data())) {
    const Closure& closure = **c;
    const std::string name = closure.name.empty() ? "lambda" : closure.name;
    if (args.size() != closure.params.size()) {
      runtime_error(name + ": expects " + plural(closure.params.size(), "argument") + ", given " +
                        std::to_string(args.size()),
                    pos);
    }
    EnvPtr frame = Environment::extend(closure.env, closure.params, std::move(args));
    return eval(*closure.body, frame);
  }
  if (const auto* p = std::get_if<PrimitiveRef>(&fn.data())) {
    const Primitive& prim = **p;
    if (args.size() < prim.min_arity || args.size() > prim.max_arity) {
      std::string expected;
      if (prim.max_arity == Primitive::kVariadic) {
        expected = "at least " + plural(prim.min_arity, "argument");
      } else if (prim.min_arity == prim.max_arity) {
        expected = plural(prim.min_arity, "argument");
      } else {
        expected = "between " + std::to_string(prim.min_arity) + " and " +
                   plural(prim.max_arity, "argument");
      }
      runtime_error(prim.name + ": expects " + expected + ", given " + std::to_string(args.size()), pos);
    }
    return prim.fn(*this, args, pos);
  }
  runtime_error("function call: expected a function after the open parenthesis, but received " +
                    to_source(fn),
                pos);
}

Value Interpreter::instantiate(const std::string& class_name, std::vector<Value> args, SourcePos pos) {
  const ClassInfo& info = classes_.at(class_name, pos);
  const std::size_t arity = info.new_arity();
  if (args.size() != arity) {
    runtime_error("new " + class_name + ": expects " + plural(arity, "argument") + ", given " +
                      std::to_string(args.size()),
                  pos);
  }
  auto object = std::make_shared<ObjectData>();
  object->class_name = class_name;
  if (const auto& ctor = info.defn().constructor) {
    EnvPtr frame = Environment::extend(nullptr, ctor->params, std::move(args));
    object->fields.reserve(ctor->initializers.size());
    for (const auto& init : ctor->initializers) object->fields.push_back(eval(*init, frame));
  } else {
    object->fields = std::move(args);
  }
  return ObjectRef(std::move(object));
}

bool Interpreter::understands(const Value& receiver, const std::string& message) const {
  if (!receiver.is_object()) return false;
  const ClassInfo* info = classes_.find(receiver.as_object()->class_name);
  return info != nullptr && (info->field_index(message) || info->find_method(message) != nullptr);
}

Value Interpreter::send(const Value& receiver, const std::string& message, std::vector<Value> args,
                        SourcePos pos) {
  if (!receiver.is_object()) {
    runtime_error("send: expected an object to receive message `" + message + "`, given " +
                      to_source(receiver),
                  pos);
  }
  const ObjectRef& object = receiver.as_object();
  const ClassInfo& info = classes_.at(object->class_name, pos);
  if (auto index = info.field_index(message)) {
    if (!args.empty()) {
      runtime_error(message + ": field access takes no arguments, given " + std::to_string(args.size()),
                    pos);
    }
    return object->fields[*index];
  }
  const MethodDefn* method = info.find_method(message);
  if (method == nullptr) {
    runtime_error("object of class " + object->class_name + " does not understand message " + message,
                  pos);
  }
  if (args.size() != method->params.size()) {
    runtime_error(message + ": expects " + plural(method->params.size(), "argument") + ", given " +
                      std::to_string(args.size()),
                  pos);
  }
  std::vector<std::string> names;
  names.reserve(method->params.size() + 1);
  names.emplace_back("this");
  names.insert(names.end(), method->params.begin(), method->params.end());
  args.insert(args.begin(), receiver);
  EnvPtr frame = Environment::extend(nullptr, names, std::move(args));
  return eval(*method->body, frame);
}

void run_with_large_stack(const std::function<void()>& fn, std::size_t bytes) {
  struct Job {
    const std::function<void()>* fn;
    std::exception_ptr error;
  } job{&fn, nullptr};

  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t thread;
  auto entry = [](void* arg) -> void* {
    auto* j = static_cast<Job*>(arg);
    try {
      (*j->fn)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  int rc = pthread_create(&thread, &attr, entry, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    // Fall back to the calling thread; the stack guard still applies.
    fn();
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace classlang
