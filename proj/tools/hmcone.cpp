#include "hmcone/error.hpp"
#include "hmcone/log.hpp"
#include "hmcone/registry.hpp"
#include "hmcone/scenario.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hmcone::Error(hmcone::ErrorCode::ConfigError, "cannot write " + path.string());
  out << content;
}

// 0 pass, 1 check failure, 2 configuration error.
int run_one(const fs::path& file, const fs::path& out_dir, const hmcone::RunOptions& opts, std::mutex& io) {
  try {
    const hmcone::Scenario s = hmcone::load_scenario(file);
    const hmcone::ScenarioResult r = hmcone::run_scenario(s, opts);
    write_file(out_dir / (s.name + ".json"), r.report.dump(2) + "\n");
    write_file(out_dir / (s.name + ".timings.json"), r.timings.dump(2) + "\n");
    for (const auto& [suffix, content] : r.artifacts) write_file(out_dir / (s.name + "." + suffix), content);
    std::lock_guard lock(io);
    std::cout << s.name << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    return r.pass ? 0 : 1;
  } catch (const hmcone::Error& e) {
    std::lock_guard lock(io);
    std::cerr << file.string() << ": " << hmcone::to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == hmcone::ErrorCode::ConfigError ? 2 : 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic maps into perturbed cones: scenario runner"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Run scenario files and write JSON reports");
  run->add_option("scenarios", files, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--jobs", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);

  bool as_json = false;
  auto* list = app.add_subcommand("list", "Print the registry catalog");
  list->add_flag("--json", as_json, "Machine-readable output");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", validate_file, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*list) {
    if (as_json) std::cout << hmcone::registry_catalog().dump(2) << "\n";
    else std::cout << hmcone::registry_text();
    return 0;
  }

  if (*validate) {
    try {
      hmcone::validate_scenario(hmcone::load_scenario(validate_file));
      std::cout << validate_file << ": ok\n";
      return 0;
    } catch (const hmcone::Error& e) {
      std::cerr << validate_file << ": " << hmcone::to_string(e.code()) << ": " << e.what() << "\n";
      return 2;
    }
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "cannot create " << out_dir << ": " << ec.message() << "\n";
    return 2;
  }
  hmcone::RunOptions opts;
  if (*seed_opt) opts.seed = seed;
  // Concurrent scenarios use the serial kernels; results are identical either way.
  opts.parallel = jobs == 1;

  std::vector<int> codes(files.size(), 0);
  std::mutex io;
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) codes[i] = run_one(files[i], out_dir, opts, io);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::min<std::size_t>(jobs, files.size()); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int worst = 0;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}
