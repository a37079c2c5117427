#include "hmcone/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace hmcone::log {

Level level() {
  static const Level lvl = [] {
    const char* v = std::getenv("HMCONE_LOG");
    if (!v) v = std::getenv("TOOL_LOG");
    const std::string s = v ? v : "";
    if (s == "debug") return Level::Debug;
    if (s == "info") return Level::Info;
    return Level::Quiet;
  }();
  return lvl;
}

void info(std::string_view msg) {
  if (level() >= Level::Info) std::cerr << "[info] " << msg << "\n";
}

void debug(std::string_view msg) {
  if (level() >= Level::Debug) std::cerr << "[debug] " << msg << "\n";
}

}  // namespace hmcone::log
