#include "classlang/error.hpp"

namespace classlang {

std::string SourcePos::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::lex: return "lex error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::level: return "level error";
    case ErrorKind::definition: return "definition error";
    case ErrorKind::runtime: return "runtime error";
    case ErrorKind::setup: return "setup error";
    case ErrorKind::protocol: return "protocol error";
  }
  return "error";
}

std::string Error::describe() const {
  std::string out;
  if (pos_.known()) out += pos_.to_string() + ": ";
  out += to_string(kind_);
  out += ": ";
  out += what();
  return out;
}

LevelError::LevelError(const std::string& feature, int required_level, SourcePos pos)
    : Error(ErrorKind::level,
            feature + " requires class/" + std::to_string(required_level), pos),
      required_level_(required_level) {}

}  // namespace classlang
