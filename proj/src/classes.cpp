#include "classlang/classes.hpp"

namespace classlang {

std::optional<std::size_t> ClassInfo::field_index(const std::string& name) const {
  auto it = field_index_.find(name);
  if (it == field_index_.end()) return std::nullopt;
  return it->second;
}

const MethodDefn* ClassInfo::own_method(const std::string& name) const {
  auto it = own_methods_.find(name);
  if (it == own_methods_.end()) return nullptr;
  return &std::get<MethodDefn>(defn_.members[it->second]);
}

const MethodDefn* ClassInfo::find_method(const std::string& name) const {
  for (const ClassInfo* c = this; c != nullptr; c = c->super()) {
    if (const MethodDefn* m = c->own_method(name)) return m;
  }
  return nullptr;
}

std::size_t ClassInfo::new_arity() const {
  return defn_.constructor ? defn_.constructor->params.size() : all_fields_.size();
}

const ClassInfo* ClassTable::find(const std::string& name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : it->second.get();
}

const ClassInfo& ClassTable::at(const std::string& name, SourcePos pos) const {
  const ClassInfo* info = find(name);
  if (info == nullptr) throw Error(ErrorKind::runtime, "new: unknown class `" + name + "`", pos);
  return *info;
}

std::vector<std::string> ClassTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, info] : classes_) out.push_back(name);
  return out;
}

ClassTable ClassTable::with(ClassDefn defn, LanguageLevel level) const {
  const SourcePos pos = defn.pos;
  auto fail = [&pos](const std::string& message) {
    throw Error(ErrorKind::definition, message, pos);
  };
  if (classes_.count(defn.name)) fail("class `" + defn.name + "` is already defined");
  if (defn.super_name && !level.allows_super()) throw LevelError("super classes", 2, pos);
  if (defn.constructor && !level.allows_constructors()) throw LevelError("constructors", 4, pos);

  auto info = std::make_shared<ClassInfo>();
  if (defn.super_name) {
    auto it = classes_.find(*defn.super_name);
    if (it == classes_.end()) {
      fail("class `" + defn.name + "`: unknown super class `" + *defn.super_name + "`");
    }
    info->super_ = it->second;
    info->all_fields_ = it->second->all_fields_;
  }

  for (const auto& f : defn.fields) {
    if (info->super_ && info->super_->field_index(f)) {
      fail("class `" + defn.name + "`: field `" + f + "` collides with an inherited field");
    }
    info->all_fields_.push_back(f);
  }
  for (std::size_t i = 0; i < info->all_fields_.size(); ++i) {
    if (!info->field_index_.emplace(info->all_fields_[i], i).second) {
      fail("class `" + defn.name + "`: duplicate field `" + info->all_fields_[i] + "`");
    }
  }

  for (std::size_t i = 0; i < defn.members.size(); ++i) {
    const auto* m = std::get_if<MethodDefn>(&defn.members[i]);
    if (m == nullptr) continue;
    if (info->field_index_.count(m->name)) {
      throw Error(ErrorKind::definition,
                  "class `" + defn.name + "`: method `" + m->name + "` has the same name as a field",
                  m->pos);
    }
    if (!info->own_methods_.emplace(m->name, i).second) {
      throw Error(ErrorKind::definition,
                  "class `" + defn.name + "`: method `" + m->name + "` is defined twice", m->pos);
    }
    if (info->super_ && info->super_->find_method(m->name) && !level.allows_overriding()) {
      throw LevelError("overriding inherited method `" + m->name + "`", 3, m->pos);
    }
  }

  if (defn.constructor && defn.constructor->initializers.size() != info->all_fields_.size()) {
    throw Error(ErrorKind::definition,
                "class `" + defn.name + "`: constructor must initialize " +
                    std::to_string(info->all_fields_.size()) + " fields, found " +
                    std::to_string(defn.constructor->initializers.size()),
                defn.constructor->pos);
  }

  info->defn_ = std::move(defn);
  ClassTable out = *this;
  out.classes_.emplace(info->defn_.name, std::move(info));
  return out;
}

}  // namespace classlang
