#include "concierge/errors.hpp"
#include "concierge/service.hpp"

#include <httplib.h>

namespace concierge::service {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(Service& s) : service(s) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      QueryParams query;
      for (const auto& [k, v] : req.params) query.emplace(k, v);  // first value wins
      const auto r = service.dispatch(req.method, req.path, query, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.Patch(".*", handler);
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind", host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port, const std::function<void(int)>& on_ready) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind", host + ":" + std::to_string(port));
  if (on_ready) on_ready(bound);
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace concierge::service
