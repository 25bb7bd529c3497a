#pragma once

#include <cstdio>

namespace proxplast {

/// Logging cadence, controlled by the PROXPLAST_LOG environment variable
/// ("error" default, "info", "debug"). Messages go to stderr.
enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level();

bool log_enabled(LogLevel level);

void log_message(LogLevel level, const char* fmt, ...);

} // namespace proxplast
