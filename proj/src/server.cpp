#include "classlang/server.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <list>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "classlang/interpreter.hpp"

namespace classlang {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>classlang</title></head>
<body><p>classlang session server. Connect a client to <code>/session</code>.</p></body></html>
)";

std::string content_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

}  // namespace

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  Impl(Program p, LanguageLevel l, ServerConfig c)
      : program(std::move(p)), level(l), config(std::move(c)), acceptor(ioc), signals(ioc) {}

  Program program;
  LanguageLevel level;
  ServerConfig config;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::signal_set signals;
  std::vector<std::thread> io_threads;
  std::atomic<std::size_t> active{0};
  std::atomic<bool> stopped{false};   // no new sessions; wait() returns
  std::atomic<bool> io_done{false};   // network threads may exit

  struct Worker {
    std::thread thread;
    std::shared_ptr<wire::Inbox> inbox;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::mutex workers_mu;
  std::list<Worker> workers;

  void accept();
  void start_session(const std::shared_ptr<wire::Inbox>& inbox,
                     const std::shared_ptr<wire::SessionSink>& sink);
  http::response<http::string_body> route(const http::request<http::string_body>& req) const;
  void shutdown();

  // Sessions whose worker has finished but whose close handshake is still
  // in flight.
  std::atomic<int> closing{0};
  int pending_writes() const { return closing; }
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Server::Impl* server)
      : ws_(std::move(socket)), server_(server), inbox_(std::make_shared<wire::Inbox>()) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  // Called from the session worker.
  void enqueue(std::string text, bool is_frame) {
    outbox_.push(std::move(text), is_frame);
    net::post(ws_.get_executor(), [self = shared_from_this()] { self->pump(); });
  }

  void request_close() {
    if (close_requested_.exchange(true)) return;
    ++server_->closing;
    net::post(ws_.get_executor(), [self = shared_from_this()] { self->pump(); });
  }

 private:
  class Sink : public wire::SessionSink {
   public:
    explicit Sink(std::shared_ptr<WsSession> session) : session_(std::move(session)) {}
    void send(std::string text, bool is_frame) override { session_->enqueue(std::move(text), is_frame); }
    void close() override { session_->request_close(); }

   private:
    std::shared_ptr<WsSession> session_;
  };

  void on_accept(beast::error_code ec) {
    if (ec) return;
    server_->start_session(inbox_, std::make_shared<Sink>(shared_from_this()));
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      disconnected();
      return;
    }
    inbox_->push({wire::Inbound::Kind::text, beast::buffers_to_string(buffer_.data())});
    buffer_.consume(buffer_.size());
    read();
  }

  void disconnected() {
    if (!gone_.exchange(true)) inbox_->push({wire::Inbound::Kind::disconnected, {}});
  }

  void finish_close() {
    if (close_requested_ && !close_finished_.exchange(true)) --server_->closing;
  }

  void pump() {
    if (writing_ || closing_) return;
    auto next = outbox_.try_pop();
    if (!next) {
      if (close_requested_) {
        closing_ = true;
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) {
                          self->disconnected();
                          self->finish_close();
                        });
      }
      return;
    }
    writing_ = true;
    current_ = std::move(*next);
    ws_.text(true);
    ws_.async_write(net::buffer(current_),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->writing_ = false;
                      if (ec) {
                        self->disconnected();
                        self->finish_close();
                        return;
                      }
                      self->pump();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Server::Impl* server_;
  std::shared_ptr<wire::Inbox> inbox_;
  wire::Outbox outbox_;
  beast::flat_buffer buffer_;
  std::string current_;
  bool writing_ = false;
  bool closing_ = false;
  std::atomic<bool> close_requested_{false};
  std::atomic<bool> gone_{false};
  std::atomic<bool> close_finished_{false};
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, Server::Impl* server)
      : stream_(std::move(socket)), server_(server) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

 private:
  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      std::string_view target(req_.target().data(), req_.target().size());
      if (target.substr(0, target.find('?')) == "/session") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
        return;
      }
    }
    res_ = server_->route(req_);
    http::async_write(stream_, res_, [self = shared_from_this()](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  beast::tcp_stream stream_;
  Server::Impl* server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  http::response<http::string_body> res_;
};

}  // namespace

void Server::Impl::accept() {
  // Handlers held by the io_context refer to the Impl by plain pointer so
  // that destroying the context releases them without a reference cycle.
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<HttpSession>(std::move(socket), this)->run();
    accept();
  });
}

http::response<http::string_body> Server::Impl::route(const http::request<http::string_body>& req) const {
  http::response<http::string_body> res;
  res.version(req.version());
  res.keep_alive(false);
  std::string target(req.target().data(), req.target().size());
  target = target.substr(0, target.find('?'));

  auto reply = [&res](http::status status, std::string type, std::string body) {
    res.result(status);
    res.set(http::field::content_type, type);
    res.body() = std::move(body);
    res.prepare_payload();
  };

  if (req.method() != http::verb::get) {
    reply(http::status::method_not_allowed, "text/plain", "method not allowed");
    return res;
  }
  if (target == "/healthz") {
    reply(http::status::ok, "text/plain", "ok");
    return res;
  }
  if (target == "/session") {
    reply(http::status::upgrade_required, "text/plain", "websocket upgrade required");
    return res;
  }
  if (target == "/" && config.web_root.empty()) {
    reply(http::status::ok, "text/html; charset=utf-8", kPlaceholderPage);
    return res;
  }
  if (!config.web_root.empty() && target.find("..") == std::string::npos) {
    std::filesystem::path file = config.web_root / (target == "/" ? "index.html" : target.substr(1));
    std::ifstream in(file, std::ios::binary);
    if (in) {
      std::ostringstream body;
      body << in.rdbuf();
      reply(http::status::ok, content_type(file), body.str());
      return res;
    }
  }
  reply(http::status::not_found, "text/plain", "not found");
  return res;
}

void Server::Impl::start_session(const std::shared_ptr<wire::Inbox>& inbox,
                                 const std::shared_ptr<wire::SessionSink>& sink) {
  std::lock_guard lock(workers_mu);
  for (auto it = workers.begin(); it != workers.end();) {
    if (*it->done) {
      it->thread.join();
      it = workers.erase(it);
    } else {
      ++it;
    }
  }
  if (stopped) {
    inbox->push({wire::Inbound::Kind::disconnected, {}});
  }
  auto done = std::make_shared<std::atomic<bool>>(false);
  ++active;
  std::thread t([self = shared_from_this(), inbox, sink, done] {
    try {
      run_with_large_stack([&] {
        Interpreter interp(self->level);
        Value initial;
        try {
          LoadResult load = interp.load(self->program);
          if (!load.big_bang) throw Error(ErrorKind::setup, "program has no big-bang form");
          initial = interp.eval(*load.big_bang);
        } catch (const Error& e) {
          sink->send(wire::encode(wire::Hello{}), false);
          sink->send(wire::encode(wire::Halt{e.what()}), false);
          sink->close();
          return;
        }
        wire::SessionOutcome outcome = wire::session_loop(interp, initial, *inbox, *sink, self->config.session);
        if (self->config.on_session_end) self->config.on_session_end(outcome);
      });
    } catch (const std::exception& e) {
      std::cerr << "classlang: session failed: " << e.what() << '\n';
      sink->close();
    }
    --self->active;
    *done = true;
  });
  workers.push_back({std::move(t), inbox, done});
}

void Server::Impl::shutdown() {
  if (stopped.exchange(true)) return;
  stopped.notify_all();
  net::post(ioc, [this] {
    beast::error_code ignored;
    acceptor.close(ignored);
    signals.cancel(ignored);
  });
  {
    std::lock_guard lock(workers_mu);
    for (auto& w : workers) w.inbox->push({wire::Inbound::Kind::disconnected, {}});
  }
}

Server::Server(Program program, LanguageLevel level, ServerConfig config)
    : impl_(std::make_shared<Impl>(std::move(program), level, std::move(config))) {}

Server::~Server() {
  stop();
}

void Server::start() {
  auto& im = *impl_;
  tcp::endpoint endpoint(net::ip::make_address(im.config.address), im.config.port);
  im.acceptor.open(endpoint.protocol());
  im.acceptor.set_option(net::socket_base::reuse_address(true));
  im.acceptor.bind(endpoint);
  im.acceptor.listen(net::socket_base::max_listen_connections);
  im.accept();
  im.signals.add(SIGINT);
  im.signals.add(SIGTERM);
  im.signals.async_wait([impl = impl_.get()](beast::error_code ec, int) {
    if (!ec) impl->shutdown();
  });
  for (int i = 0; i < 2; ++i) {
    im.io_threads.emplace_back([impl = impl_] {
      // Work guard keeps the context alive while sessions are idle.
      auto guard = net::make_work_guard(impl->ioc);
      while (!impl->io_done) {
        impl->ioc.run_for(std::chrono::milliseconds(50));
        if (impl->ioc.stopped()) impl->ioc.restart();
      }
    });
  }
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

std::size_t Server::active_sessions() const { return impl_->active; }

void Server::wait() {
  impl_->stopped.wait(false);
}

void Server::stop() {
  impl_->shutdown();
  std::list<Impl::Worker> workers;
  {
    std::lock_guard lock(impl_->workers_mu);
    workers.swap(impl_->workers);
  }
  for (auto& w : workers) {
    if (w.thread.joinable()) w.thread.join();
  }
  // Give queued halts and close frames a moment to reach their clients.
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(200);
  while (impl_->pending_writes() > 0 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  impl_->io_done = true;
  for (auto& t : impl_->io_threads) {
    if (t.joinable()) t.join();
  }
  impl_->io_threads.clear();
}

}  // namespace classlang
