#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "classlang/ast.hpp"

namespace classlang {

// A registered class with its superclass chain resolved.
class ClassInfo {
 public:
  const ClassDefn& defn() const { return defn_; }
  const std::string& name() const { return defn_.name; }
  const ClassInfo* super() const { return super_.get(); }

  // Inherited fields first, then own fields.
  const std::vector<std::string>& all_fields() const { return all_fields_; }
  std::optional<std::size_t> field_index(const std::string& name) const;

  // Most-derived definition of `name`, searching this class then its supers.
  const MethodDefn* find_method(const std::string& name) const;
  const MethodDefn* own_method(const std::string& name) const;

  // Arity of `new`: the constructor's parameters when one is declared,
  // otherwise one argument per field.
  std::size_t new_arity() const;

 private:
  friend class ClassTable;

  ClassDefn defn_;
  std::shared_ptr<const ClassInfo> super_;
  std::vector<std::string> all_fields_;
  std::unordered_map<std::string, std::size_t> field_index_;
  std::unordered_map<std::string, std::size_t> own_methods_;  // index into defn_.members
};

// Frozen once a program is loaded; lookups are read-only afterwards.
class ClassTable {
 public:
  const ClassInfo* find(const std::string& name) const;
  // Throws a runtime error naming the unknown class.
  const ClassInfo& at(const std::string& name, SourcePos pos = {}) const;
  std::size_t size() const { return classes_.size(); }
  std::vector<std::string> names() const;

  // Validates `defn` against the table and the active level and returns the
  // extended table. Errors: duplicate class, unknown super, inherited field
  // collisions, methods clashing with fields, overriding below class/3, and
  // constructors whose initializer count differs from the field count.
  [[nodiscard]] ClassTable with(ClassDefn defn, LanguageLevel level) const;

 private:
  std::map<std::string, std::shared_ptr<const ClassInfo>> classes_;
};

[[nodiscard]] inline ClassTable register_class(const ClassTable& table, ClassDefn defn,
                                               LanguageLevel level) {
  return table.with(std::move(defn), level);
}

}  // namespace classlang
