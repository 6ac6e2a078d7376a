#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include "classlang/interpreter.hpp"
#include "classlang/reader.hpp"
#include "classlang/testing.hpp"
#include "classlang/universe.hpp"

namespace testsupport {

inline std::filesystem::path corpus(std::string_view name) {
  return std::filesystem::path(CLASSLANG_CORPUS_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline classlang::Program corpus_program(std::string_view name, int level = 1) {
  return classlang::parse_source(slurp(corpus(name)), classlang::LanguageLevel(level));
}

// Loads `source` and evaluates `expr` in its global environment.
inline classlang::Value eval_in(std::string_view source, std::string_view expr, int level = 4) {
  classlang::LanguageLevel lvl(level);
  classlang::Interpreter interp(lvl);
  interp.load(classlang::parse_source(source, lvl));
  return interp.eval(*classlang::parse_expression(expr, lvl));
}

inline std::string eval_print(std::string_view expr, int level = 4) {
  return classlang::to_source(eval_in("", expr, level));
}

// A loaded world program with its initial world evaluated.
struct World {
  std::unique_ptr<classlang::Interpreter> interp;
  classlang::Value initial;
};

inline World load_world(std::string_view corpus_name) {
  classlang::LanguageLevel lvl(1);
  auto interp = std::make_unique<classlang::Interpreter>(lvl);
  auto load = interp->load(corpus_program(corpus_name));
  classlang::Value initial = interp->eval(*load.big_bang);
  return {std::move(interp), initial};
}

inline classlang::EventTrace ticks(std::size_t n) {
  classlang::EventTrace t;
  t.events.assign(n, classlang::Event::tick());
  return t;
}

namespace beast = boost::beast;
namespace net = boost::asio;
using tcp = net::ip::tcp;

// Blocking HTTP GET; returns (status, body).
inline std::pair<int, std::string> http_get(unsigned short port, const std::string& target) {
  net::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
  beast::http::request<beast::http::empty_body> req{beast::http::verb::get, target, 11};
  req.set(beast::http::field::host, "localhost");
  beast::http::write(stream, req);
  beast::flat_buffer buffer;
  beast::http::response<beast::http::string_body> res;
  beast::http::read(stream, buffer, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), res.body()};
}

// Scripted WebSocket client for /session.
class WsClient {
 public:
  explicit WsClient(unsigned short port) : ws_(ioc_) {
    net::connect(beast::get_lowest_layer(ws_),
                 std::array{tcp::endpoint(net::ip::make_address("127.0.0.1"), port)});
    ws_.handshake("localhost", "/session");
  }

  nlohmann::json read() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return nlohmann::json::parse(beast::buffers_to_string(buffer.data()));
  }

  // Reads until a message of `type` arrives; other messages are skipped.
  nlohmann::json read_until(std::string_view type) {
    while (true) {
      nlohmann::json m = read();
      if (m.at("type") == type) return m;
    }
  }

  void send(const nlohmann::json& msg) { send_text(msg.dump()); }
  void send_text(const std::string& text) {
    ws_.text(true);
    ws_.write(net::buffer(text));
  }

  // Drops the TCP connection without a close handshake.
  void drop() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).close(ec);
  }

 private:
  net::io_context ioc_;
  beast::websocket::stream<tcp::socket> ws_;
};

}  // namespace testsupport
