#pragma once

#include <string>

namespace priocomp {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Level taken from PRIO_COMPOSE_LOG (error|info|debug), default info.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace priocomp
