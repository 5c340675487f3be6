#include "concierge/log.hpp"

#include <iostream>
#include <mutex>

namespace concierge::log {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& sink() {
  static Sink s = [](Level level, std::string_view message) {
    const char* tag = level == Level::kError ? "error" : level == Level::kWarning ? "warning" : "info";
    std::cerr << "[concierge] " << tag << ": " << message << '\n';
  };
  return s;
}

}  // namespace

Sink set_sink(Sink s) {
  std::lock_guard lock(sink_mutex());
  std::swap(sink(), s);
  return s;
}

void write(Level level, std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(level, message);
}

}  // namespace concierge::log
