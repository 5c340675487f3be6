#pragma once

#include <functional>
#include <string_view>

namespace concierge::log {

enum class Level { kInfo, kWarning, kError };

using Sink = std::function<void(Level, std::string_view)>;

// Replaces the process-wide sink (stderr by default); returns the old one.
Sink set_sink(Sink sink);

void write(Level level, std::string_view message);
inline void info(std::string_view m) { write(Level::kInfo, m); }
inline void warn(std::string_view m) { write(Level::kWarning, m); }
inline void error(std::string_view m) { write(Level::kError, m); }

}  // namespace concierge::log
