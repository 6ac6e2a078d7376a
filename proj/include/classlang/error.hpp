#pragma once

#include <stdexcept>
#include <string>

namespace classlang {

struct SourcePos {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  std::string to_string() const;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
  friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
};

enum class ErrorKind {
  lex,
  parse,
  level,
  definition,
  runtime,
  setup,
  protocol,
};

const char* to_string(ErrorKind kind);

// Every diagnostic raised by the language implementation. The message never
// carries the position; describe() prefixes it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, SourcePos pos = {})
      : std::runtime_error(message), kind_(kind), pos_(pos) {}

  ErrorKind kind() const { return kind_; }
  const SourcePos& pos() const { return pos_; }

  // "3:14: parse error: unbalanced parentheses"
  std::string describe() const;

 private:
  ErrorKind kind_;
  SourcePos pos_;
};

// A construct was used below the language level that introduces it.
class LevelError : public Error {
 public:
  LevelError(const std::string& feature, int required_level, SourcePos pos = {});

  int required_level() const { return required_level_; }

 private:
  int required_level_;
};

}  // namespace classlang
