#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "classlang/interpreter.hpp"
#include "classlang/scene.hpp"

namespace classlang {

struct Event {
  enum class Kind { tick, key };

  Kind kind = Kind::tick;
  std::string key;  // key events only, never empty

  static Event tick() { return {}; }
  static Event key_press(std::string key) { return {Kind::key, std::move(key)}; }

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventTrace {
  std::vector<Event> events;
  // Caps the frame log (initial frame included); remaining events are not run.
  std::optional<std::size_t> max_frames;
};

// One JSON object per line: {"type":"tick"} or {"type":"key","key":"left"}.
// Blank lines are skipped. Mouse events are reserved and rejected.
EventTrace parse_trace(std::string_view jsonl);
nlohmann::json event_to_json(const Event& e);
std::string trace_to_jsonl(const std::vector<Event>& events);

struct Frame {
  std::size_t step = 0;  // 0 is the initial world
  Scene scene;
  std::string world;     // printed world, e.g. "(new world 11)"
};

using FrameLog = std::vector<Frame>;

// Sends on-tick or on-key to the world. A world without the handler ignores
// the event. The handler must answer an object.
Value step(Interpreter& interp, const Value& world, const Event& e);

// Sends to-draw; the result must be an image.
Scene draw(Interpreter& interp, const Value& world);

// Setup check for big-bang: the world is an object that understands to-draw.
void check_world(const Interpreter& interp, const Value& world);

// True when the world defines stop-when and it answers true.
bool stop_requested(Interpreter& interp, const Value& world);

struct HeadlessRun {
  Value final_world;
  FrameLog frames;
};

// Folds step over the trace, drawing the initial world and then after every
// event. Runtime errors are re-raised with the offending step index.
HeadlessRun run_headless(Interpreter& interp, const Value& initial, const EventTrace& trace);

// One scene JSON document per line, in frame order.
std::string frames_jsonl(const FrameLog& frames);

// Writes frame-%04d.svg for every frame plus frames.jsonl into `dir`.
void export_frames(const FrameLog& frames, const std::filesystem::path& dir);

}  // namespace classlang
