#include "hmcone/scenario.hpp"

#include "experiments.hpp"
#include "hmcone/error.hpp"
#include "hmcone/log.hpp"

#include <fstream>

namespace hmcone {

namespace detail {

void Context::check(const std::string& name, bool pass, Json detail) {
  Json c;
  c["name"] = name;
  c["pass"] = pass;
  for (auto& [k, v] : detail.items()) c[k] = v;
  checks.push_back(std::move(c));
  log::info(name + (pass ? ": pass" : ": FAIL"));
}

void Context::timed(const std::string& key, const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  timings[key] = dt.count();
}

}  // namespace detail

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : detail::experiments()) names.push_back(name);
  return names;
}

Scenario parse_scenario(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "scenario must be a JSON object");
  Scenario s;
  s.base_dir = base_dir;
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw Error(ErrorCode::ConfigError, "scenario needs a string 'name'");
  }
  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    throw Error(ErrorCode::ConfigError, "scenario needs a string 'experiment'");
  }
  s.name = j.at("name").get<std::string>();
  s.experiment = j.at("experiment").get<std::string>();
  if (!detail::experiments().count(s.experiment)) {
    throw Error(ErrorCode::ConfigError, "unknown experiment '" + s.experiment + "'");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw Error(ErrorCode::ConfigError, "seed must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  s.config = j.contains("params") ? j.at("params") : Json::object();
  if (!s.config.is_object()) throw Error(ErrorCode::ConfigError, "'params' must be an object");
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open scenario " + file.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, file.string() + ": " + e.what());
  }
  return parse_scenario(j, file.parent_path());
}

namespace {

void run_experiment(detail::Context& ctx) {
  try {
    detail::experiments().at(ctx.scenario.experiment)(ctx);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

}  // namespace

void validate_scenario(const Scenario& s) {
  detail::Context ctx(s);
  ctx.seed = s.seed;
  ctx.dry_run = true;
  run_experiment(ctx);
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts) {
  detail::Context ctx(s);
  ctx.seed = opts.seed.value_or(s.seed);
  ctx.parallel = opts.parallel;
  log::info("running " + s.name + " (" + s.experiment + ")");
  ctx.timed("total", [&] { run_experiment(ctx); });
  ScenarioResult res;
  res.pass = !ctx.checks.empty();
  for (const Json& c : ctx.checks) res.pass = res.pass && c.at("pass").get<bool>();
  res.report["scenario"] = s.name;
  res.report["experiment"] = s.experiment;
  res.report["seed"] = ctx.seed;
  res.report["pass"] = res.pass;
  res.report["checks"] = ctx.checks;
  res.report["results"] = ctx.results;
  res.timings["scenario"] = s.name;
  res.timings["seconds"] = ctx.timings;
  res.artifacts = std::move(ctx.artifacts);
  return res;
}

}  // namespace hmcone
