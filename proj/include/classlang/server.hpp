#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "classlang/ast.hpp"
#include "classlang/wire.hpp"

namespace classlang {

struct ServerConfig {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;  // 0 binds an ephemeral port
  wire::SessionConfig session;
  // Static files served under "/" when set; otherwise "/" answers a
  // placeholder page.
  std::filesystem::path web_root;
  // Invoked on the session worker after each session ends.
  std::function<void(const wire::SessionOutcome&)> on_session_end;
};

// HTTP + WebSocket front end for live worlds:
//   GET /session  WebSocket upgrade, one world per connection
//   GET /healthz  200 "ok"
//   GET /         client page
// Every session loads the program into its own interpreter.
class Server {
 public:
  Server(Program program, LanguageLevel level, ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the listener and starts the network threads.
  void start();
  unsigned short port() const;
  std::size_t active_sessions() const;
  // Blocks until SIGINT/SIGTERM or stop().
  void wait();
  void stop();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace classlang
