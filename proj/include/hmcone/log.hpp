#pragma once

#include <string_view>

namespace hmcone::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

/// Verbosity from HMCONE_LOG (or TOOL_LOG): "quiet", "info", "debug". Default quiet.
Level level();
void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace hmcone::log
