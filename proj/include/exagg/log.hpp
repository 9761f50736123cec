#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace exagg::log {

enum class Level : int { Debug = 0, Info = 1, Warn = 2, Error = 3 };

// Verbosity comes from the EXAGG_LOG environment variable
// (debug|info|warn|error); default is warn.
inline Level threshold() {
    static Level level = [] {
        const char* env = std::getenv("EXAGG_LOG");
        if (env == nullptr) return Level::Warn;
        if (std::strcmp(env, "debug") == 0) return Level::Debug;
        if (std::strcmp(env, "info") == 0) return Level::Info;
        if (std::strcmp(env, "warn") == 0) return Level::Warn;
        if (std::strcmp(env, "error") == 0) return Level::Error;
        return Level::Warn;
    }();
    return level;
}

inline void emit(Level level, const char* tag, const std::string& message) {
    if (static_cast<int>(level) < static_cast<int>(threshold())) return;
    std::fprintf(stderr, "[%s] %s\n", tag, message.c_str());
}

inline void debug(const std::string& m) { emit(Level::Debug, "debug", m); }
inline void info(const std::string& m) { emit(Level::Info, "info", m); }
inline void warn(const std::string& m) { emit(Level::Warn, "warn", m); }
inline void error(const std::string& m) { emit(Level::Error, "error", m); }

}  // namespace exagg::log
