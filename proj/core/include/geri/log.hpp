#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

// Tiny stderr logger. Verbosity comes from the GERI_LOG environment
// variable: quiet, error, warn, info (default), debug.

namespace geri::log {

enum class Level : int { quiet = 0, error = 1, warn = 2, info = 3, debug = 4 };

inline Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("GERI_LOG");
    if (env == nullptr) return Level::info;
    if (std::strcmp(env, "quiet") == 0) return Level::quiet;
    if (std::strcmp(env, "error") == 0) return Level::error;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    return Level::info;
  }();
  return lvl;
}

template <class... Args>
void emit(Level at, const char* tag, const char* fmt, Args... args) {
  if (static_cast<int>(level()) < static_cast<int>(at)) return;
  std::fprintf(stderr, "[%s] ", tag);
  if constexpr (sizeof...(Args) == 0) {
    std::fputs(fmt, stderr);
  } else {
    std::fprintf(stderr, fmt, args...);
  }
  std::fputc('\n', stderr);
}

template <class... Args>
void error(const char* fmt, Args... args) { emit(Level::error, "error", fmt, args...); }
template <class... Args>
void warn(const char* fmt, Args... args) { emit(Level::warn, "warn", fmt, args...); }
template <class... Args>
void info(const char* fmt, Args... args) { emit(Level::info, "info", fmt, args...); }
template <class... Args>
void debug(const char* fmt, Args... args) { emit(Level::debug, "debug", fmt, args...); }

}  // namespace geri::log
