#pragma once

#include "hmcone/registry.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hmcone {

struct Scenario {
  std::string name;
  std::string experiment;
  Json config;
  std::uint64_t seed = 1;
  std::filesystem::path base_dir;  // relative mesh and boundary files resolve here
};

/// Throws ConfigError on unknown experiments or malformed fields.
Scenario parse_scenario(const Json& j, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file);

/// Builds every registry object the scenario references without running checks.
void validate_scenario(const Scenario& s);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  bool parallel = true;
};

struct ScenarioResult {
  Json report;   // deterministic given scenario and seed
  Json timings;  // wall-clock data, kept out of the report
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> artifacts;  // file suffix, content
};

/// Runs the experiment. Domain errors raised by the checks are recorded as failed
/// checks; configuration errors propagate as ConfigError.
ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts = {});

std::vector<std::string> experiment_names();

}  // namespace hmcone
