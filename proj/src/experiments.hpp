#pragma once

#include "hmcone/scenario.hpp"

#include <chrono>
#include <functional>
#include <map>

namespace hmcone::detail {

struct Context {
  explicit Context(const Scenario& s) : scenario(s) {}

  const Scenario& scenario;
  std::uint64_t seed = 1;
  bool parallel = true;
  bool dry_run = false;  // build objects and return before any check runs
  Json checks = Json::array();
  Json results = Json::object();
  Json timings = Json::object();
  std::vector<std::pair<std::string, std::string>> artifacts;

  const Json& cfg() const { return scenario.config; }
  void check(const std::string& name, bool pass, Json detail = Json::object());
  /// Runs fn, recording its wall time under key.
  void timed(const std::string& key, const std::function<void()>& fn);
};

using Experiment = void (*)(Context&);
const std::map<std::string, Experiment>& experiments();

}  // namespace hmcone::detail
