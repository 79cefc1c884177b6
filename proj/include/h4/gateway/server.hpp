#pragma once

#include <sys/socket.h>

#include <atomic>
#include <fstream>
#include <list>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "h4/gateway/session.hpp"

namespace h4::gateway {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

/// Live session service. Each TCP connection is either a WebSocket upgrade,
/// which gets its own Session and thread, or a plain HTTP GET for the static
/// client assets.
class Server {
 public:
  Server(ServiceConfig config, const std::string& address, unsigned short port,
         std::string static_dir = {})
      : config_(std::move(config)), static_dir_(std::move(static_dir)), acceptor_(ioc_) {
    // Validates the table and phrases before any client connects.
    Session probe(config_);
    const tcp::endpoint endpoint(asio::ip::make_address(address), port);
    beast::error_code ec;
    acceptor_.open(endpoint.protocol(), ec);
    if (!ec) acceptor_.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) acceptor_.bind(endpoint, ec);
    if (!ec) acceptor_.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) throw Error("cannot listen on " + address + ":" + std::to_string(port) + ": " + ec.message());
  }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  void start() {
    accept_next();
    io_thread_ = std::thread([this] { ioc_.run(); });
  }

  void stop() {
    if (stopped_.exchange(true)) return;
    asio::post(ioc_, [this] {
      beast::error_code ec;
      acceptor_.close(ec);
    });
    if (io_thread_.joinable()) io_thread_.join();
    std::lock_guard lock(mutex_);
    for (auto& c : connections_)
      if (!*c.done) ::shutdown(c.fd, SHUT_RDWR);
    for (auto& c : connections_)
      if (c.thread.joinable()) c.thread.join();
    connections_.clear();
  }

 private:
  struct Connection {
    int fd;
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  void accept_next() {
    acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::lock_guard lock(mutex_);
      reap();
      auto done = std::make_shared<std::atomic<bool>>(false);
      const int fd = socket.native_handle();
      connections_.push_back({fd, std::thread([this, s = std::move(socket), done]() mutable {
                                serve(std::move(s));
                                *done = true;
                              }),
                              done});
      accept_next();
    });
  }

  void reap() {
    for (auto it = connections_.begin(); it != connections_.end();) {
      if (*it->done) {
        it->thread.join();
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void serve(tcp::socket socket) {
    try {
      beast::flat_buffer buffer;
      http::request<http::string_body> req;
      http::read(socket, buffer, req);
      if (websocket::is_upgrade(req)) {
        websocket::stream<tcp::socket> ws(std::move(socket));
        ws.accept(req);
        Session session(config_);
        for (;;) {
          beast::flat_buffer frame;
          ws.read(frame);
          for (const auto& reply : session.handle_text(beast::buffers_to_string(frame.data()))) {
            ws.text(true);
            ws.write(asio::buffer(reply));
          }
        }
      }
      http::write(socket, static_response(req));
      beast::error_code ec;
      socket.shutdown(tcp::socket::shutdown_send, ec);
    } catch (const std::exception&) {
      // Client went away or the server is stopping.
    }
  }

  http::response<http::string_body> static_response(const http::request<http::string_body>& req) const {
    http::response<http::string_body> res;
    res.version(req.version());
    res.keep_alive(false);
    std::string target(req.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target == "/") target = "/index.html";

    std::string body;
    bool found = false;
    if (req.method() == http::verb::get && !static_dir_.empty() && target.find("..") == std::string::npos) {
      std::ifstream in(static_dir_ + target, std::ios::binary);
      if (in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        body = ss.str();
        found = true;
      }
    }
    if (found) {
      res.result(http::status::ok);
      res.set(http::field::content_type, content_type(target));
      res.body() = std::move(body);
    } else {
      res.result(http::status::not_found);
      res.set(http::field::content_type, "text/plain");
      res.body() = "not found; the session protocol is served over WebSocket\n";
    }
    res.prepare_payload();
    return res;
  }

  static std::string content_type(const std::string& path) {
    auto ends = [&path](std::string_view ext) {
      return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
    };
    if (ends(".html")) return "text/html";
    if (ends(".js")) return "text/javascript";
    if (ends(".css")) return "text/css";
    if (ends(".json")) return "application/json";
    if (ends(".wav")) return "audio/wav";
    return "application/octet-stream";
  }

  ServiceConfig config_;
  std::string static_dir_;
  asio::io_context ioc_;
  tcp::acceptor acceptor_;
  std::thread io_thread_;
  std::mutex mutex_;
  std::list<Connection> connections_;
  std::atomic<bool> stopped_{false};
};

}  // namespace h4::gateway
