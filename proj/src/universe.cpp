#include "classlang/universe.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace classlang {

EventTrace parse_trace(std::string_view jsonl) {
  EventTrace trace;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const SourcePos pos{line_no, 1};
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error(ErrorKind::setup, "event trace: malformed JSON", pos);
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      throw Error(ErrorKind::setup, "event trace: expected an object with a string `type`", pos);
    }
    const std::string type = j["type"];
    if (type == "tick") {
      trace.events.push_back(Event::tick());
    } else if (type == "key") {
      if (!j.contains("key") || !j["key"].is_string() || j["key"].get<std::string>().empty()) {
        throw Error(ErrorKind::setup, "event trace: key events need a non-empty `key`", pos);
      }
      trace.events.push_back(Event::key_press(j["key"]));
    } else if (type == "mouse") {
      throw Error(ErrorKind::setup, "mouse events unsupported", pos);
    } else {
      throw Error(ErrorKind::setup, "event trace: unknown event type `" + type + "`", pos);
    }
  }
  return trace;
}

nlohmann::json event_to_json(const Event& e) {
  if (e.kind == Event::Kind::tick) return {{"type", "tick"}};
  return {{"type", "key"}, {"key", e.key}};
}

std::string trace_to_jsonl(const std::vector<Event>& events) {
  std::string out;
  for (const Event& e : events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

void check_world(const Interpreter& interp, const Value& world) {
  if (!world.is_object()) {
    throw Error(ErrorKind::setup, "big-bang: expected an object as the initial world, given " +
                                      to_source(world));
  }
  if (!interp.understands(world, "to-draw")) {
    throw Error(ErrorKind::setup, "big-bang: the world of class " + world.as_object()->class_name +
                                      " must define a to-draw method");
  }
}

Value step(Interpreter& interp, const Value& world, const Event& e) {
  const char* handler = e.kind == Event::Kind::tick ? "on-tick" : "on-key";
  if (!interp.understands(world, handler)) return world;
  std::vector<Value> args;
  if (e.kind == Event::Kind::key) args.emplace_back(e.key);
  Value next = interp.send(world, handler, std::move(args));
  if (!next.is_object()) {
    throw Error(ErrorKind::runtime, std::string(handler) + ": handler must return a world, returned " +
                                        to_source(next));
  }
  return next;
}

Scene draw(Interpreter& interp, const Value& world) {
  Value image = interp.send(world, "to-draw", {});
  if (!image.is_scene()) {
    throw Error(ErrorKind::runtime, "to-draw: expected an image, returned " + to_source(image));
  }
  return image.as_scene();
}

bool stop_requested(Interpreter& interp, const Value& world) {
  if (!interp.understands(world, "stop-when")) return false;
  Value v = interp.send(world, "stop-when", {});
  if (!v.is_boolean()) {
    throw Error(ErrorKind::runtime, "stop-when: expected a boolean, returned " + to_source(v));
  }
  return v.as_boolean();
}

HeadlessRun run_headless(Interpreter& interp, const Value& initial, const EventTrace& trace) {
  check_world(interp, initial);
  HeadlessRun run{initial, {}};
  auto first = draw(interp, initial);
  run.frames.push_back({0, std::move(first), to_source(initial)});
  std::size_t limit = trace.events.size();
  if (trace.max_frames) limit = std::min(limit, *trace.max_frames > 0 ? *trace.max_frames - 1 : 0);
  for (std::size_t i = 0; i < limit; ++i) {
    const std::size_t index = i + 1;
    try {
      run.final_world = step(interp, run.final_world, trace.events[i]);
      auto scene = draw(interp, run.final_world);
      run.frames.push_back({index, std::move(scene), to_source(run.final_world)});
    } catch (const Error& err) {
      throw Error(err.kind(), "step " + std::to_string(index) + ": " + err.what(), err.pos());
    }
  }
  return run;
}

std::string frames_jsonl(const FrameLog& frames) {
  std::string out;
  for (const Frame& f : frames) {
    out += to_json(f.scene).dump();
    out += '\n';
  }
  return out;
}

void export_frames(const FrameLog& frames, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const Frame& f : frames) {
    char name[32];
    std::snprintf(name, sizeof name, "frame-%04zu.svg", f.step);
    std::ofstream(dir / name, std::ios::binary) << render_svg(f.scene);
  }
  std::ofstream(dir / "frames.jsonl", std::ios::binary) << frames_jsonl(frames);
}

}  // namespace classlang
