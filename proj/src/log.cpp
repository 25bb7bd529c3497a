#include "proxplast/log.hpp"

#include <cstdarg>
#include <cstdlib>
#include <cstring>

namespace proxplast {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("PROXPLAST_LOG");
        if (env == nullptr) return LogLevel::error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

bool log_enabled(LogLevel level) { return static_cast<int>(level) <= static_cast<int>(log_level()); }

void log_message(LogLevel level, const char* fmt, ...) {
    if (!log_enabled(level)) return;
    std::va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
    va_end(args);
}

} // namespace proxplast
