#include "priocomp/log.hpp"

#include <cstdlib>
#include <iostream>

namespace priocomp {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("PRIO_COMPOSE_LOG");
        if (env == nullptr) return LogLevel::info;
        const std::string v(env);
        if (v == "error") return LogLevel::error;
        if (v == "debug") return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

namespace {
void emit(LogLevel at, const char* tag, const std::string& msg) {
    if (log_level() >= at) std::cerr << tag << msg << "\n";
}
}  // namespace

void log_error(const std::string& msg) { emit(LogLevel::error, "[error] ", msg); }
void log_info(const std::string& msg) { emit(LogLevel::info, "[info] ", msg); }
void log_debug(const std::string& msg) { emit(LogLevel::debug, "[debug] ", msg); }

}  // namespace priocomp
