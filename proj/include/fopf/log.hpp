// Copyright 2026 The fopf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>

// Minimal stderr logger. Verbosity comes from the OPF_LOG environment
// variable: "quiet", "warn" (default), "info" or "debug".
namespace fopf::log {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

inline Level level_from_env() {
    const char* env = std::getenv("OPF_LOG");
    if (env == nullptr) return Level::warn;
    std::string_view v(env);
    if (v == "quiet" || v == "0") return Level::quiet;
    if (v == "info" || v == "2") return Level::info;
    if (v == "debug" || v == "3") return Level::debug;
    return Level::warn;
}

inline Level& threshold() {
    static Level level = level_from_env();
    return level;
}

inline void set_level(Level level) { threshold() = level; }

inline void write(Level level, std::string_view tag, std::string_view msg) {
    if (static_cast<int>(level) > static_cast<int>(threshold())) return;
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << "[fopf " << tag << "] " << msg << '\n';
}

inline void warn(std::string_view msg) { write(Level::warn, "warn", msg); }
inline void info(std::string_view msg) { write(Level::info, "info", msg); }
inline void debug(std::string_view msg) { write(Level::debug, "debug", msg); }

} // namespace fopf::log
