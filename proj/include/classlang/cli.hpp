#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "classlang/ast.hpp"

namespace classlang::cli {

enum class Command { run, test, world, serve };

struct RunConfig {
  Command command = Command::run;
  std::filesystem::path source;
  std::optional<int> lang;  // --lang, 0..4
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> out;
  unsigned short port = 8080;
  double tick_rate = 30.0;
  std::optional<std::filesystem::path> web_root;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // load, runtime or test failure
inline constexpr int kUsage = 2;   // bad arguments, unreadable files, missing big-bang

// --lang wins over a `#lang class/N` header, which wins over the
// CLASSLANG_LANG environment value; class/1 otherwise. Throws a setup error
// for an out-of-range or malformed level.
LanguageLevel resolve_level(std::optional<int> flag, std::string_view source, const char* env);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_test(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_world(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches. Evaluation runs on a large-stack thread.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace classlang::cli
