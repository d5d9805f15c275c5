#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace padbench::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold from PADBENCH_LOG (error|warn|info|debug); defaults to warn.
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("PADBENCH_LOG");
    if (env == nullptr) return Level::Warn;
    const std::string_view v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

inline void write(Level level, std::string_view message) {
  if (level > threshold()) return;
  static std::mutex mu;
  static constexpr std::string_view kNames[] = {"error", "warn", "info", "debug"};
  std::lock_guard lock(mu);
  std::cerr << "[padbench " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

inline void warn(std::string_view m) { write(Level::Warn, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void debug(std::string_view m) { write(Level::Debug, m); }

}  // namespace padbench::log
