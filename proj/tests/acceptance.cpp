// One PASS/FAIL line per primary acceptance criterion. Exit status is
// nonzero when any criterion fails.
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "classlang/server.hpp"
#include "support.hpp"

using namespace classlang;
using testsupport::corpus_program;
using testsupport::load_world;
using testsupport::ticks;

namespace {

// Collects the first failed expectation of a criterion.
struct Criterion {
  std::string failure;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

int failures = 0;

void report(const char* name, const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    run_with_large_stack([&] { body(c); });
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const bool ok = c.failure.empty();
  if (!ok) ++failures;
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, ok ? c.detail.c_str() : c.failure.c_str());
  std::fflush(stdout);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void golden_corpus(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  ProgramRun posn = eval_program(corpus_program("posn.rkt"), LanguageLevel(1));
  ProgramRun tree = eval_program(corpus_program("tree.rkt"), LanguageLevel(1));
  const double ms = ms_since(t0);
  c.expect(posn.report.total == 3 && posn.report.passed == 3, "posn: " + posn.report.summary());
  c.expect(tree.report.total == 2 && tree.report.passed == 2, "tree: " + tree.report.summary());
  c.expect(ms < 1000.0, "took " + std::to_string(ms) + " ms");
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.1f ms", ms);
  c.detail = std::string("posn 3/3, tree 2/2, exact equality, ") + timing;
}

void level_gating(Criterion& c) {
  struct Fixture {
    const char* file;
    int below;
  };
  int assertions = 0;
  for (Fixture f : {Fixture{"levels/dot-at-0.rkt", 0}, Fixture{"levels/super-at-1.rkt", 1},
                    Fixture{"levels/override-at-2.rkt", 2}, Fixture{"levels/constructor-at-3.rkt", 3}}) {
    const std::string src = testsupport::slurp(testsupport::corpus(f.file));
    int required = -1;
    try {
      eval_program(parse_source(src, LanguageLevel(f.below)), LanguageLevel(f.below));
    } catch (const LevelError& e) {
      required = std::string(e.what()).find("class/" + std::to_string(f.below + 1)) != std::string::npos
                     ? e.required_level()
                     : -2;
    }
    c.expect(required == f.below + 1, std::string(f.file) + " not rejected naming class/" + std::to_string(f.below + 1));
    ++assertions;
    bool clean = false;
    try {
      ProgramRun run = eval_program(parse_source(src, LanguageLevel(f.below + 1)), LanguageLevel(f.below + 1));
      clean = run.report.all_passed();
    } catch (const Error&) {
    }
    c.expect(clean, std::string(f.file) + " does not load cleanly at class/" + std::to_string(f.below + 1));
    ++assertions;
  }
  c.detail = std::to_string(assertions) + " assertions";
}

void world_semantics(Criterion& c) {
  auto w = load_world("world.rkt");
  HeadlessRun five = run_headless(*w.interp, w.initial, ticks(5));
  c.expect(to_source(five.final_world) == "(new world 15)", "5 ticks gave " + to_source(five.final_world));
  c.expect(five.frames.size() == 6, "5 ticks gave " + std::to_string(five.frames.size()) + " frames");

  // A key at position p resets to 10 at that step; later ticks count up again.
  for (std::size_t p = 0; p <= 5; ++p) {
    EventTrace t = ticks(5);
    t.events.insert(t.events.begin() + static_cast<long>(p), Event::key_press("a"));
    HeadlessRun run = run_headless(*w.interp, w.initial, t);
    c.expect(run.frames[p + 1].world == "(new world 10)", "key at " + std::to_string(p) + " did not reset");
    const std::string expected = "(new world " + std::to_string(10 + (5 - p)) + ")";
    c.expect(run.frames.back().world == expected, "key at " + std::to_string(p) + " ended at " + run.frames.back().world);
    c.expect(run.frames.size() == t.events.size() + 1, "frame count law broken");
  }

  auto r = load_world("rocket.rkt");
  HeadlessRun landed = run_headless(*r.interp, r.initial, ticks(401));
  c.expect(to_source(landed.final_world) == "(new landed-world)", "401 ticks gave " + to_source(landed.final_world));
  c.expect(landed.frames.size() == 402, "frame count law broken on 401 ticks");
  const std::string svg = render_svg(draw(*r.interp, landed.final_world));
  HeadlessRun after = run_headless(*r.interp, landed.final_world, ticks(100));
  bool fixed = after.frames.size() == 101;
  for (const Frame& f : after.frames) fixed = fixed && render_svg(f.scene) == svg;
  c.expect(fixed, "landed rocket moved");

  for (const char* trace : {"traces/empty.jsonl", "traces/five-ticks.jsonl", "traces/tick-key-tick.jsonl",
                            "traces/401-ticks.jsonl"}) {
    EventTrace t = parse_trace(testsupport::slurp(testsupport::corpus(trace)));
    for (testsupport::World* world : {&w, &r}) {
      HeadlessRun run = run_headless(*world->interp, world->initial, t);
      c.expect(run.frames.size() == t.events.size() + 1, std::string("frame count law broken on ") + trace);
    }
  }
  c.detail = "5 ticks -> (new world 15); key resets at all 6 positions; 401 ticks -> landed; 100 more ticks "
             "byte-identical; frames = events + 1 on all traces";
}

void numeric_tower(Criterion& c) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<long> num(-1000000000L, 1000000000L), den(1, 1000000000L);
  auto rational = [&] { return Number::exact(num(gen), den(gen)); };
  auto lowest = [](const Number& n) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n.numerator().get_mpz_t(), n.denominator().get_mpz_t());
    return g == 1 && n.denominator() > 0;
  };
  int ops = 0;
  for (int i = 0; i < 10000; ++i) {
    Number a = rational(), b = rational();
    std::vector<Number> results{a + b, a - b, a * b};
    if (!b.is_zero()) results.push_back(a / b);
    for (const Number& r : results) {
      c.expect(r.is_exact(), "inexact result from exact operands");
      c.expect(lowest(r), "result not in lowest terms: " + r.to_string());
      ++ops;
    }
  }
  for (int i = 0; i < 1000; ++i) {
    Number r = rational();
    Number root = classlang::sqrt(r * r);
    c.expect(root.is_exact() && root.identical(classlang::abs(r)), "sqrt(r^2) != |r| for " + r.to_string());
  }
  const Number third = Number::exact(1, 3);
  c.expect(third.to_string() == "1/3", "1/3 printed as " + third.to_string());
  c.expect(Number::parse(third.to_string())->identical(third), "1/3 does not round-trip");
  c.detail = std::to_string(ops) + " exact ops closed and reduced; 1000 sqrt(r^2) exact; 1/3 round-trips";
}

void purity_and_dispatch(Criterion& c) {
  int hashes = 0;
  for (const char* name : {"posn.rkt", "tree.rkt", "world.rkt", "rocket.rkt", "empty.rkt"}) {
    Program p = corpus_program(name);
    Interpreter in{LanguageLevel(1)};
    LoadResult load = in.load(p);
    const std::size_t h = in.globals().structural_hash();
    for (const TestCase& t : lift_tests(p)) {
      in.eval(*t.actual);
      in.eval(*t.expected);
      c.expect(in.globals().structural_hash() == h, std::string(name) + ": environment changed");
      ++hashes;
    }
    if (load.big_bang) {
      run_headless(in, in.eval(*load.big_bang), ticks(10));
      c.expect(in.globals().structural_hash() == h, std::string(name) + ": environment changed by world");
      ++hashes;
    }
  }

  std::mt19937_64 gen(11);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); };
  int cases = 0;
  while (cases < 500) {
    const long depth = pick(1, 5);
    std::string src;
    std::vector<std::vector<int>> owns(depth);
    std::vector<std::string> fields;
    for (long k = 0; k < depth; ++k) {
      src += "(define-class k" + std::to_string(k) + (k ? " (super k" + std::to_string(k - 1) + ")" : "") + " (fields";
      for (long f = pick(0, 2); f > 0; --f) {
        fields.push_back("f" + std::to_string(fields.size()));
        src += " " + fields.back();
      }
      src += ")";
      for (int m = 0; m < 3; ++m) {
        if (pick(0, 1)) {
          owns[k].push_back(m);
          src += " (define (m" + std::to_string(m) + ") " + std::to_string(k) + ")";
        }
      }
      src += ")";
    }
    Interpreter in{LanguageLevel(3)};
    in.load(parse_source(src, LanguageLevel(3)));
    std::vector<Value> args;
    for (std::size_t i = 0; i < fields.size(); ++i) args.emplace_back(pick(-99, 99));
    Value obj = in.instantiate("k" + std::to_string(depth - 1), args);
    for (std::size_t i = 0; i < fields.size(); ++i, ++cases) {
      c.expect(value_equal(in.send(obj, fields[i], {}), args[i]), "field law failed in " + src);
    }
    for (int m = 0; m < 3; ++m, ++cases) {
      long owner = -1;
      for (long k = depth - 1; k >= 0 && owner < 0; --k) {
        if (std::find(owns[k].begin(), owns[k].end(), m) != owns[k].end()) owner = k;
      }
      const std::string msg = "m" + std::to_string(m);
      if (owner < 0) {
        c.expect(!in.understands(obj, msg), "phantom method in " + src);
      } else {
        c.expect(to_source(in.send(obj, msg, {})) == std::to_string(owner), "dispatch not most-derived in " + src);
      }
    }
  }
  c.detail = std::to_string(hashes) + " purity hashes stable; " + std::to_string(cases) +
             " random dispatch/field cases";
}

void replay_equivalence(Criterion& c) {
  std::mutex mu;
  std::condition_variable cv;
  std::optional<wire::SessionOutcome> outcome;
  ServerConfig config;
  config.address = "127.0.0.1";
  config.port = 0;
  config.session.tick_rate = 120;
  config.on_session_end = [&](const wire::SessionOutcome& o) {
    std::lock_guard lock(mu);
    outcome = o;
    cv.notify_all();
  };
  Program program = corpus_program("world.rkt");
  Server server(program, LanguageLevel(1), config);
  server.start();

  std::map<std::int64_t, std::string> received;
  {
    testsupport::WsClient client(server.port());
    c.expect(client.read()["type"] == "hello", "no hello");
    std::int64_t last = -1;
    int keys = 0;
    while (keys < 4) {
      nlohmann::json f = client.read_until("frame");
      c.expect(f["seq"].get<std::int64_t>() > last, "seq regressed");
      last = f["seq"];
      received[last] = f["scene"].dump();
      if (last % 7 == 6) {
        client.send({{"type", "key"}, {"key", keys % 2 ? "left" : "a"}});
        ++keys;
      }
    }
    client.send({{"type", "bye"}});
    while (true) {
      nlohmann::json m = client.read();
      if (m["type"] == "halt") break;
      received[m["seq"]] = m["scene"].dump();
    }
  }
  {
    std::unique_lock lock(mu);
    cv.wait_for(lock, std::chrono::seconds(10), [&] { return outcome.has_value(); });
  }
  server.stop();
  if (!outcome) {
    c.expect(false, "session never ended");
    return;
  }

  // Persist the merged event stream, read it back, and replay headlessly.
  EventTrace trace = parse_trace(trace_to_jsonl(outcome->events));
  auto w = load_world("world.rkt");
  HeadlessRun replay = run_headless(*w.interp, w.initial, trace);
  const std::size_t keys = std::count_if(trace.events.begin(), trace.events.end(),
                                         [](const Event& e) { return e.kind == Event::Kind::key; });
  c.expect(keys == 4, "expected 4 key events in the log, found " + std::to_string(keys));
  c.expect(replay.frames.size() == outcome->scenes.size(), "frame count differs from the live session");
  for (std::size_t i = 0; i < replay.frames.size() && i < outcome->scenes.size(); ++i) {
    c.expect(to_json(replay.frames[i].scene).dump() == outcome->scenes[i], "scene differs at seq " + std::to_string(i));
  }
  for (const auto& [seq, scene] : received) {
    c.expect(seq < static_cast<std::int64_t>(replay.frames.size()) &&
                 to_json(replay.frames[seq].scene).dump() == scene,
             "client frame differs at seq " + std::to_string(seq));
  }
  c.expect(to_source(replay.final_world) == to_source(outcome->final_world), "final world differs");
  c.detail = std::to_string(trace.events.size()) + " live events (" + std::to_string(keys) + " keys), " +
             std::to_string(received.size()) + " client frames byte-identical on replay";
}

}  // namespace

int main() {
  report("golden corpus fidelity", golden_corpus);
  report("level gating", level_gating);
  report("world semantics", world_semantics);
  report("numeric tower", numeric_tower);
  report("purity and dispatch", purity_and_dispatch);
  report("replay equivalence", replay_equivalence);
  std::printf("%d of 6 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
