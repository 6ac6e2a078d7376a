#include "classlang/wire.hpp"

#include <chrono>
#include <stop_token>
#include <thread>

namespace classlang::wire {

namespace {

[[noreturn]] void protocol_error(const std::string& message) {
  throw Error(ErrorKind::protocol, message);
}

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) protocol_error(std::string("missing field `") + name + "`");
  return j.at(name);
}

std::string string_field(const nlohmann::json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) protocol_error(std::string("field `") + name + "` must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string encode(const Message& msg) {
  nlohmann::json j = std::visit(
      [](const auto& m) -> nlohmann::json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          nlohmann::json h = {{"type", "hello"}, {"protocol-version", m.protocol_version}};
          if (m.scene_width_hint) h["scene-width-hint"] = *m.scene_width_hint;
          return h;
        } else if constexpr (std::is_same_v<T, FrameMessage>) {
          return {{"type", "frame"}, {"seq", m.seq}, {"scene", m.scene}, {"world", m.world}};
        } else if constexpr (std::is_same_v<T, Halt>) {
          return {{"type", "halt"}, {"reason", m.reason}};
        } else if constexpr (std::is_same_v<T, Key>) {
          return {{"type", "key"}, {"key", m.key}};
        } else {
          return {{"type", "bye"}};
        }
      },
      msg);
  return j.dump();
}

Message decode(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    protocol_error("malformed JSON");
  }
  if (!j.is_object()) protocol_error("expected a JSON object");
  const std::string type = string_field(j, "type");
  if (type == "key") {
    std::string key = string_field(j, "key");
    if (key.empty()) protocol_error("key events need a non-empty key");
    return Key{std::move(key)};
  }
  if (type == "bye") return Bye{};
  if (type == "hello") {
    Hello h{string_field(j, "protocol-version"), std::nullopt};
    if (j.contains("scene-width-hint") && j["scene-width-hint"].is_number()) {
      h.scene_width_hint = j["scene-width-hint"].get<double>();
    }
    return h;
  }
  if (type == "frame") {
    const auto& seq = field(j, "seq");
    if (!seq.is_number_integer()) protocol_error("field `seq` must be an integer");
    auto scene = field(j, "scene");
    auto world = string_field(j, "world");
    return FrameMessage{seq.get<std::int64_t>(), std::move(scene), std::move(world)};
  }
  if (type == "halt") return Halt{string_field(j, "reason")};
  protocol_error("unknown message type `" + type + "`");
}

void Inbox::push(Inbound item) {
  {
    std::lock_guard lock(mu_);
    items_.push_back(std::move(item));
  }
  cv_.notify_one();
}

Inbound Inbox::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return !items_.empty(); });
  Inbound item = std::move(items_.front());
  items_.pop_front();
  return item;
}

void Outbox::push(std::string text, bool is_frame) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    items_.push_back({std::move(text), is_frame});
    if (is_frame) ++frames_;
    // Keep the newest frames; an older frame is superseded by a newer one.
    for (auto it = items_.begin(); frames_ > kMaxLag && it != items_.end();) {
      if (it->is_frame) {
        it = items_.erase(it);
        --frames_;
        ++dropped_;
      } else {
        ++it;
      }
    }
  }
  cv_.notify_one();
}

std::optional<std::string> Outbox::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return !items_.empty() || closed_; });
  if (items_.empty()) return std::nullopt;
  Item item = std::move(items_.front());
  items_.pop_front();
  if (item.is_frame) --frames_;
  return std::move(item.text);
}

std::optional<std::string> Outbox::try_pop() {
  std::lock_guard lock(mu_);
  if (items_.empty()) return std::nullopt;
  Item item = std::move(items_.front());
  items_.pop_front();
  if (item.is_frame) --frames_;
  return std::move(item.text);
}

void Outbox::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::size_t Outbox::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

std::size_t Outbox::pending() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

namespace {

// Pushes a tick into the inbox at a fixed rate until stopped.
class Ticker {
 public:
  Ticker(Inbox& inbox, double rate) {
    if (rate <= 0) return;
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rate));
    thread_ = std::jthread([&inbox, period](std::stop_token stop) {
      std::mutex mu;
      std::condition_variable_any cv;
      auto next = std::chrono::steady_clock::now() + period;
      std::unique_lock lock(mu);
      // wait_until answers false both on timeout and on a stop request.
      while (!cv.wait_until(lock, stop, next, [] { return false; }) && !stop.stop_requested()) {
        inbox.push({Inbound::Kind::tick, {}});
        next += period;
      }
    });
  }

 private:
  std::jthread thread_;
};

struct Session {
  Interpreter& interp;
  SessionSink& sink;
  SessionOutcome outcome;
  std::int64_t seq = 0;

  void emit_frame(const Value& world) {
    nlohmann::json scene = to_json(draw(interp, world));
    outcome.scenes.push_back(scene.dump());
    sink.send(encode(FrameMessage{seq++, std::move(scene), to_source(world)}), true);
  }

  void halt(std::string reason) {
    outcome.halt_reason = reason;
    sink.send(encode(Halt{std::move(reason)}), false);
  }
};

}  // namespace

SessionOutcome session_loop(Interpreter& interp, const Value& initial, Inbox& inbox,
                            SessionSink& sink, const SessionConfig& config) {
  Session s{interp, sink, {initial, {}, {}, {}}};
  bool greeted = false;
  try {
    check_world(interp, initial);
    Hello hello;
    hello.scene_width_hint = draw(interp, initial).width().to_double();
    sink.send(encode(hello), false);
    greeted = true;
    s.emit_frame(initial);
    if (stop_requested(interp, initial)) {
      s.halt("stopped");
      sink.close();
      return std::move(s.outcome);
    }
  } catch (const Error& e) {
    if (!greeted) sink.send(encode(Hello{}), false);
    s.halt(e.what());
    sink.close();
    return std::move(s.outcome);
  }

  Ticker ticker(inbox, config.tick_rate);
  while (true) {
    Inbound item = inbox.pop();
    if (item.kind == Inbound::Kind::disconnected) break;
    Event event;
    if (item.kind == Inbound::Kind::text) {
      Message msg;
      try {
        msg = decode(item.text);
      } catch (const Error&) {
        s.halt("protocol error");
        break;
      }
      if (std::holds_alternative<Bye>(msg)) {
        s.halt("stopped");
        break;
      }
      if (const auto* h = std::get_if<Hello>(&msg)) {
        if (h->protocol_version != kProtocolVersion) {
          s.halt("protocol version mismatch");
          break;
        }
        continue;
      }
      const auto* key = std::get_if<Key>(&msg);
      if (key == nullptr) {
        s.halt("protocol error");
        break;
      }
      event = Event::key_press(key->key);
    }
    try {
      Value next = step(interp, s.outcome.final_world, event);
      s.outcome.events.push_back(event);
      s.outcome.final_world = next;
      s.emit_frame(next);
      if (stop_requested(interp, next)) {
        s.halt("stopped");
        break;
      }
    } catch (const Error& e) {
      s.halt(e.what());
      break;
    }
  }
  sink.close();
  return std::move(s.outcome);
}

}  // namespace classlang::wire
