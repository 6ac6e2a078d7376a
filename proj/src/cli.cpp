#include "classlang/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "classlang/interpreter.hpp"
#include "classlang/reader.hpp"
#include "classlang/server.hpp"
#include "classlang/testing.hpp"
#include "classlang/universe.hpp"

namespace classlang::cli {

namespace {

// Reported as a usage failure rather than a language error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct Loaded {
  LanguageLevel level{1};
  Program program;
};

Loaded load_source(const RunConfig& config) {
  const std::string source = read_file(config.source);
  LanguageLevel level = resolve_level(config.lang, source, std::getenv("CLASSLANG_LANG"));
  return {level, parse_source(source, level)};
}

void print_warnings(const Interpreter& interp, std::ostream& err) {
  for (const auto& w : interp.warnings()) err << "warning: " << w << '\n';
}

// Shared driver: maps failures to exit codes and diagnostics to `err`.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "classlang: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.describe() << '\n';
    return kFailed;
  }
}

}  // namespace

LanguageLevel resolve_level(std::optional<int> flag, std::string_view source, const char* env) {
  auto checked = [](int n, const std::string& origin) {
    if (n < LanguageLevel::kMin || n > LanguageLevel::kMax) {
      throw Error(ErrorKind::setup, origin + ": language level must be 0 through 4, given " +
                                        std::to_string(n));
    }
    return LanguageLevel(n);
  };
  // The header is validated even when the flag overrides it.
  const std::optional<int> header = lang_header_level(source);
  if (flag) return checked(*flag, "--lang");
  if (header) return LanguageLevel(*header);
  if (env != nullptr && *env != '\0') {
    const std::string text(env);
    int n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorKind::setup, "CLASSLANG_LANG: expected a level 0 through 4, given `" + text + "`");
    }
    return checked(n, "CLASSLANG_LANG");
  }
  return LanguageLevel(1);
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded loaded = load_source(config);
    Interpreter interp(loaded.level);
    LoadResult load;
    try {
      load = interp.load(loaded.program);
    } catch (...) {
      print_warnings(interp, err);
      throw;
    }
    print_warnings(interp, err);
    for (const PrintedValue& p : load.printed) out << to_source(p.value) << '\n';
    const auto cases = lift_tests(loaded.program);
    if (cases.empty()) return kOk;
    TestReport report = run_tests(cases, interp);
    out << report.render();
    return report.all_passed() ? kOk : kFailed;
  });
}

int cmd_test(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded loaded = load_source(config);
    Interpreter interp(loaded.level);
    interp.load(loaded.program);
    print_warnings(interp, err);
    TestReport report = run_tests(lift_tests(loaded.program), interp);
    out << report.render();
    return report.all_passed() ? kOk : kFailed;
  });
}

int cmd_world(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded loaded = load_source(config);
    EventTrace trace;
    if (config.trace) trace = parse_trace(read_file(*config.trace));
    Interpreter interp(loaded.level);
    LoadResult load = interp.load(loaded.program);
    print_warnings(interp, err);
    if (!load.big_bang) throw UsageError(config.source.string() + " has no big-bang form");
    Value initial = interp.eval(*load.big_bang);
    HeadlessRun run = run_headless(interp, initial, trace);
    if (config.out) export_frames(run.frames, *config.out);
    out << to_source(run.final_world) << '\n';
    const auto cases = lift_tests(loaded.program);
    if (cases.empty()) return kOk;
    TestReport report = run_tests(cases, interp);
    if (!report.all_passed()) {
      err << report.render();
      return kFailed;
    }
    return kOk;
  });
}

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded loaded = load_source(config);
    {
      // Surface load errors before accepting connections.
      Interpreter interp(loaded.level);
      LoadResult load = interp.load(loaded.program);
      print_warnings(interp, err);
      if (!load.big_bang) throw UsageError(config.source.string() + " has no big-bang form");
      check_world(interp, interp.eval(*load.big_bang));
    }
    ServerConfig sc;
    sc.port = config.port;
    sc.session.tick_rate = config.tick_rate;
    if (config.web_root) sc.web_root = *config.web_root;
    Server server(std::move(loaded.program), loaded.level, sc);
    try {
      server.start();
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot listen on port ") + std::to_string(config.port) + ": " + e.what());
    }
    out << "listening on http://localhost:" << server.port() << "/ (session at /session)" << std::endl;
    server.wait();
    server.stop();
    return kOk;
  });
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"classlang: class/0 through class/4 teaching languages"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&config](CLI::App* sub) {
    sub->add_option("FILE", config.source, "program source")->required();
    sub->add_option("--lang", config.lang, "language level, overrides #lang")->check(CLI::Range(0, 4));
  };
  CLI::App* run = app.add_subcommand("run", "evaluate a program and run its tests");
  add_common(run);
  CLI::App* test = app.add_subcommand("test", "run a program's tests only");
  add_common(test);
  CLI::App* world = app.add_subcommand("world", "replay an event trace against a big-bang program");
  add_common(world);
  world->add_option("--trace", config.trace, "JSON-lines event trace")->check(CLI::ExistingFile);
  world->add_option("--out", config.out, "directory for frame SVGs and frames.jsonl");
  CLI::App* serve = app.add_subcommand("serve", "serve live sessions over WebSocket");
  add_common(serve);
  serve->add_option("--port", config.port, "listen port (0 picks a free port)");
  serve->add_option("--tick-rate", config.tick_rate, "ticks per second")->check(CLI::NonNegativeNumber);
  serve->add_option("--web-root", config.web_root, "static client files served at /")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Command command = Command::run;
  if (test->parsed()) command = Command::test;
  if (world->parsed()) command = Command::world;
  if (serve->parsed()) command = Command::serve;
  config.command = command;

  int code = kOk;
  auto dispatch = [&] {
    switch (config.command) {
      case Command::run: code = cmd_run(config, out, err); break;
      case Command::test: code = cmd_test(config, out, err); break;
      case Command::world: code = cmd_world(config, out, err); break;
      case Command::serve: code = cmd_serve(config, out, err); break;
    }
  };
  // Sessions run their own large-stack workers; everything else evaluates here.
  if (config.command == Command::serve) {
    dispatch();
  } else {
    run_with_large_stack(dispatch);
  }
  out.flush();
  return code;
}

}  // namespace classlang::cli
