#pragma once

#include "concierge/errors.hpp"
#include "concierge/feedback.hpp"
#include "concierge/pipeline.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <json.hpp>

namespace concierge::service {

struct Response {
  int status = 200;
  std::string body;
};

using QueryParams = std::map<std::string, std::string>;

int http_status(ErrorCode code);
nlohmann::ordered_json error_body(const Error& error);

// Answers every request from exactly one snapshot, taken once at the start
// of the request. Retrains are serialized and publish by swapping the
// snapshot pointer; in-flight requests keep the snapshot they started with.
class Service {
 public:
  explicit Service(pipeline::SnapshotPtr initial);

  pipeline::SnapshotPtr current() const;
  void publish(pipeline::SnapshotPtr next);

  Response dispatch(std::string_view method, std::string_view path, const QueryParams& query, std::string_view body);

  // Rebuilds from the store and feedback log; the old snapshot stays live
  // when this throws.
  pipeline::SnapshotPtr retrain();

 private:
  nlohmann::ordered_json route(const pipeline::PipelineSnapshot& snap, std::string_view method, std::string_view path,
                               const QueryParams& query, std::string_view body, int& status);

  mutable std::mutex snapshot_mutex_;
  pipeline::SnapshotPtr snapshot_;
  std::mutex retrain_mutex_;
  feedback::FeedbackLog log_;
};

// cpp-httplib front end.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds (port 0 picks a free port) and serves on a background thread;
  // returns the bound port. Throws Error(kIo) when binding fails.
  int start(const std::string& host, int port);
  // Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port, const std::function<void(int)>& on_ready = {});
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace concierge::service
