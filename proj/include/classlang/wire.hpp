#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "classlang/interpreter.hpp"
#include "classlang/universe.hpp"

namespace classlang::wire {

inline constexpr std::string_view kProtocolVersion = "1";

// Server to client.
struct Hello {
  std::string protocol_version{kProtocolVersion};
  std::optional<double> scene_width_hint;
};
struct FrameMessage {
  std::int64_t seq = 0;
  nlohmann::json scene;
  std::string world;
};
struct Halt {
  std::string reason;
};
// Client to server. A client may also open with its own Hello to announce
// the protocol version it speaks.
struct Key {
  std::string key;
};
struct Bye {};

using Message = std::variant<Hello, FrameMessage, Halt, Key, Bye>;

// One JSON object per WebSocket text message, discriminated by "type".
std::string encode(const Message& msg);
// Throws a protocol error on malformed JSON, unknown types, or missing fields.
Message decode(std::string_view text);

// Single ordered queue feeding a session: ticks from the timer, text from
// the network reader, and the disconnect notice.
struct Inbound {
  enum class Kind { tick, text, disconnected };
  Kind kind = Kind::tick;
  std::string text;
};

class Inbox {
 public:
  void push(Inbound item);
  Inbound pop();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Inbound> items_;
};

// Pending outbound messages for one connection. When more than kMaxLag
// frames are waiting, the oldest waiting frames are dropped; other messages
// are never dropped.
class Outbox {
 public:
  static constexpr std::size_t kMaxLag = 60;

  void push(std::string text, bool is_frame);
  // Blocks until a message is available; nullopt once closed and drained.
  std::optional<std::string> pop();
  std::optional<std::string> try_pop();
  void close();
  std::size_t dropped() const;
  std::size_t pending() const;

 private:
  struct Item {
    std::string text;
    bool is_frame;
  };
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Item> items_;
  std::size_t frames_ = 0;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

class SessionSink {
 public:
  virtual ~SessionSink() = default;
  virtual void send(std::string text, bool is_frame) = 0;
  virtual void close() = 0;
};

struct SessionConfig {
  double tick_rate = 30.0;  // ticks per second; 0 disables the timer
};

struct SessionOutcome {
  Value final_world;
  std::vector<Event> events;        // every processed event, in order
  std::vector<std::string> scenes;  // scene JSON of every emitted frame, seq order
  std::string halt_reason;          // empty when the client dropped
};

// Runs one live world: hello, the initial frame, then one frame per event
// from the merged tick/key stream until stop-when, bye, a handler error,
// a protocol error, or disconnect.
SessionOutcome session_loop(Interpreter& interp, const Value& initial, Inbox& inbox,
                            SessionSink& sink, const SessionConfig& config);

}  // namespace classlang::wire
