#include <doctest.h>

#include <chrono>
#include <condition_variable>
#include <thread>

#include "classlang/server.hpp"
#include "support.hpp"

using namespace classlang;
using testsupport::WsClient;

namespace {

// Polls `pred` for up to two seconds.
template <typename Pred>
bool eventually(Pred pred) {
  for (int i = 0; i < 200; ++i) {
    if (pred()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return pred();
}

ServerConfig quiet_config(double tick_rate = 0) {
  ServerConfig c;
  c.address = "127.0.0.1";
  c.port = 0;
  c.session.tick_rate = tick_rate;
  return c;
}

}  // namespace

TEST_SUITE("server") {

TEST_CASE("healthz and static routes") {
  Server server(testsupport::corpus_program("world.rkt"), LanguageLevel(1), quiet_config());
  server.start();
  CHECK(testsupport::http_get(server.port(), "/healthz") == std::pair<int, std::string>{200, "ok"});
  auto root = testsupport::http_get(server.port(), "/");
  CHECK(root.first == 200);
  CHECK(root.second.find("/session") != std::string::npos);
  CHECK(testsupport::http_get(server.port(), "/missing").first == 404);
  CHECK(testsupport::http_get(server.port(), "/session").first == 426);
  server.stop();
}

TEST_CASE("web root") {
  auto dir = std::filesystem::temp_directory_path() / "classlang-web-root";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<p>client</p>";
  std::ofstream(dir / "app.js") << "1;";
  ServerConfig c = quiet_config();
  c.web_root = dir;
  Server server(testsupport::corpus_program("world.rkt"), LanguageLevel(1), c);
  server.start();
  CHECK(testsupport::http_get(server.port(), "/").second == "<p>client</p>");
  CHECK(testsupport::http_get(server.port(), "/app.js").second == "1;");
  CHECK(testsupport::http_get(server.port(), "/../etc/passwd").first == 404);
  server.stop();
  std::filesystem::remove_all(dir);
}

TEST_CASE("live session: initial frame, key reset, disconnect") {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<wire::SessionOutcome> ended;
  ServerConfig c = quiet_config(50);
  c.on_session_end = [&](const wire::SessionOutcome& o) {
    std::lock_guard lock(mu);
    ended.push_back(o);
    cv.notify_all();
  };
  Server server(testsupport::corpus_program("world.rkt"), LanguageLevel(1), c);
  server.start();
  {
    WsClient client(server.port());
    nlohmann::json hello = client.read();
    CHECK(hello["type"] == "hello");
    nlohmann::json first = client.read();
    CHECK(first["type"] == "frame");
    CHECK(first["seq"] == 0);
    CHECK(first["scene"]["x"] == 10);
    CHECK(first["world"] == "(new world 10)");

    // Let a few ticks through, then press a key.
    nlohmann::json f;
    do {
      f = client.read_until("frame");
    } while (f["seq"] < 3);
    CHECK(f["scene"]["x"].get<int>() > 10);
    client.send({{"type", "key"}, {"key", "a"}});
    bool reset = false;
    for (int i = 0; i < 500 && !reset; ++i) {
      f = client.read_until("frame");
      reset = f["world"] == "(new world 10)";
    }
    CHECK(reset);
    CHECK(f["scene"]["x"] == 10);
    CHECK(server.active_sessions() == 1);
    client.drop();
  }
  {
    std::unique_lock lock(mu);
    CHECK(cv.wait_for(lock, std::chrono::seconds(5), [&] { return ended.size() == 1; }));
  }
  CHECK(eventually([&] { return server.active_sessions() == 0; }));
  CHECK(ended[0].halt_reason.empty());
  bool saw_key = std::any_of(ended[0].events.begin(), ended[0].events.end(),
                             [](const Event& e) { return e.kind == Event::Kind::key && e.key == "a"; });
  CHECK(saw_key);

  // The server keeps serving after a client drops.
  WsClient again(server.port());
  CHECK(again.read()["type"] == "hello");
  CHECK(again.read()["world"] == "(new world 10)");
  again.send({{"type", "bye"}});
  CHECK(again.read_until("halt")["reason"] == "stopped");
  server.stop();
}

TEST_CASE("concurrent sessions are independent") {
  Server server(testsupport::corpus_program("world.rkt"), LanguageLevel(1), quiet_config(0));
  server.start();
  WsClient a(server.port());
  WsClient b(server.port());
  a.read();
  b.read();
  CHECK(a.read()["world"] == "(new world 10)");
  CHECK(b.read()["world"] == "(new world 10)");
  CHECK(eventually([&] { return server.active_sessions() == 2; }));
  a.send({{"type", "bye"}});
  CHECK(a.read_until("halt")["reason"] == "stopped");
  CHECK(eventually([&] { return server.active_sessions() == 1; }));
  b.send({{"type", "jump"}});
  CHECK(b.read_until("halt")["reason"] == "protocol error");
  server.stop();
}

TEST_CASE("a program without big-bang halts the session") {
  Server server(testsupport::corpus_program("posn.rkt"), LanguageLevel(1), quiet_config());
  server.start();
  WsClient client(server.port());
  CHECK(client.read()["type"] == "hello");
  CHECK(client.read()["type"] == "halt");
  server.stop();
}

TEST_CASE("stop ends open sessions") {
  Server server(testsupport::corpus_program("world.rkt"), LanguageLevel(1), quiet_config(0));
  server.start();
  WsClient client(server.port());
  client.read();
  client.read();
  CHECK(eventually([&] { return server.active_sessions() == 1; }));
  server.stop();
  CHECK(server.active_sessions() == 0);
}

}
