#pragma once

#include <string>
#include <unordered_map>

#include "classlang/value.hpp"

namespace classlang {

// Built-in bindings visible at every level: arithmetic, comparison, lists
// and higher-order list functions, strings, booleans, and the image
// constructors used by world programs.
const std::unordered_map<std::string, Value>& builtins();

}  // namespace classlang
