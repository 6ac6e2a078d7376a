#include "classlang/value.hpp"

#include <sstream>

#include "classlang/error.hpp"

namespace classlang {

const char* Value::type_name() const {
  switch (data_.index()) {
    case 0: return "number";
    case 1: return "boolean";
    case 2: return "string";
    case 3: return "list";
    case 4:
    case 5: return "function";
    case 6: return "object";
    default: return "image";
  }
}

ConsCell::~ConsCell() {
  auto next = std::move(rest.cell);
  while (next && next.use_count() == 1) {
    auto tail = std::move(const_cast<ConsCell&>(*next).rest.cell);
    next = std::move(tail);
  }
}

ListValue cons(Value first, ListValue rest) {
  return ListValue{std::make_shared<const ConsCell>(std::move(first), std::move(rest))};
}

ListValue make_list(std::span<const Value> items) {
  ListValue out;
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(*it, std::move(out));
  return out;
}

std::vector<Value> list_items(const ListValue& list) {
  std::vector<Value> out;
  for (const ConsCell* c = list.cell.get(); c != nullptr; c = c->rest.cell.get()) {
    out.push_back(c->first);
  }
  return out;
}

std::shared_ptr<Environment> Environment::make_global() {
  auto env = std::make_shared<Environment>();
  env->global_ = true;
  return env;
}

EnvPtr Environment::extend(const EnvPtr& parent, const std::vector<std::string>& names,
                           std::vector<Value> values) {
  auto env = std::make_shared<Environment>();
  env->parent_ = parent;
  env->locals_.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) env->locals_.emplace_back(names[i], std::move(values[i]));
  return env;
}

const Value* Environment::lookup(const std::string& name) const {
  for (const Environment* e = this; e != nullptr; e = e->parent_.get()) {
    if (e->is_global()) {
      auto it = e->globals_.find(name);
      return it == e->globals_.end() ? nullptr : &it->second;
    }
    for (auto it = e->locals_.rbegin(); it != e->locals_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
  }
  return nullptr;
}

bool Environment::has_own(const std::string& name) const {
  if (is_global()) return globals_.count(name) != 0;
  for (const auto& [n, v] : locals_) {
    if (n == name) return true;
  }
  return false;
}

void Environment::define(const std::string& name, Value value, SourcePos pos) {
  if (!is_global()) throw Error(ErrorKind::definition, "definitions are only allowed at the top level", pos);
  if (!globals_.emplace(name, std::move(value)).second) {
    throw Error(ErrorKind::definition, name + ": this name was defined previously and cannot be re-defined", pos);
  }
}

std::size_t Environment::structural_hash() const {
  std::size_t h = 0;
  for (const Environment* e = this; e != nullptr; e = e->parent_.get()) {
    if (e->is_global()) {
      // Order-independent over the unordered map.
      std::size_t sum = 0;
      for (const auto& [name, v] : e->globals_) {
        sum += std::hash<std::string>{}(name) * 1000003u ^ hash_value(v);
      }
      h = h * 31 + sum;
    } else {
      for (const auto& [name, v] : e->locals_) {
        h = h * 31 + (std::hash<std::string>{}(name) ^ hash_value(v));
      }
    }
  }
  return h;
}

std::size_t hash_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return x.hash();
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? 0x1231 : 0x1237;
        } else if constexpr (std::is_same_v<T, std::string>) {
          return std::hash<std::string>{}(x) ^ 0x5a5a;
        } else if constexpr (std::is_same_v<T, ListValue>) {
          std::size_t h = 0x6b6b;
          for (const ConsCell* c = x.cell.get(); c != nullptr; c = c->rest.cell.get()) {
            h = h * 131 + hash_value(c->first);
          }
          return h;
        } else if constexpr (std::is_same_v<T, ClosureRef>) {
          return std::hash<const void*>{}(x->body.get()) ^ std::hash<std::string>{}(x->name);
        } else if constexpr (std::is_same_v<T, PrimitiveRef>) {
          return std::hash<std::string>{}(x->name) ^ 0x7c7c;
        } else if constexpr (std::is_same_v<T, ObjectRef>) {
          std::size_t h = std::hash<std::string>{}(x->class_name);
          for (const auto& f : x->fields) h = h * 131 + hash_value(f);
          return h;
        } else {
          return x.hash();
        }
      },
      v.data());
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_source(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return x.to_string();
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote(x);
        } else if constexpr (std::is_same_v<T, ListValue>) {
          if (x.empty()) return "empty";
          std::string out = "(list";
          for (const ConsCell* c = x.cell.get(); c != nullptr; c = c->rest.cell.get()) {
            out += ' ';
            out += to_source(c->first);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, ClosureRef>) {
          return x->name.empty() ? "(lambda (...) ...)" : x->name;
        } else if constexpr (std::is_same_v<T, PrimitiveRef>) {
          return x->name;
        } else if constexpr (std::is_same_v<T, ObjectRef>) {
          std::string out = "(new " + x->class_name;
          for (const auto& f : x->fields) {
            out += ' ';
            out += to_source(f);
          }
          return out + ")";
        } else {
          return to_source(x);
        }
      },
      v.data());
}

}  // namespace classlang
