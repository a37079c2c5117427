// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "hmcone/error.hpp"
#include "hmcone/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

using namespace hmcone;

namespace {

const std::filesystem::path kScenarios = HMCONE_SCENARIO_DIR;

struct Run {
  ScenarioResult result;
  double seconds = 0.0;
  std::string error;
};

std::map<std::string, Run> cache;

const Run& run(const std::string& name) {
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  Run r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.result = run_scenario(load_scenario(kScenarios / (name + ".json")));
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cache.emplace(name, std::move(r)).first->second;
}

const Json* check(const Run& r, const std::string& name) {
  if (!r.error.empty()) return nullptr;
  for (const Json& c : r.result.report.at("checks")) {
    if (c.at("name") == name) return &c;
  }
  return nullptr;
}

bool check_pass(const Run& r, const std::string& name) {
  const Json* c = check(r, name);
  return c && c->at("pass").get<bool>();
}

int failures = 0;

void verdict(int n, bool pass, double seconds, double limit, const std::string& detail) {
  const bool in_time = limit <= 0.0 || seconds < limit;
  const bool ok = pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %d: %s  %s  [%.2f s", n, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  if (limit > 0.0) std::printf(" / limit %.0f s", limit);
  std::printf("]\n");
  std::fflush(stdout);
}

void criterion1() {
  const Run& r = run("sphere_beyond_infinity");
  const Json* closed = check(r, "closed_form");
  const Json* spec = check(r, "spectrum");
  char buf[256];
  std::snprintf(buf, sizeof buf, "closed form max err %.3g, spectrum max err %.3g (tol 1e-9)",
                closed ? closed->value("max_abs_error", -1.0) : -1.0, spec ? spec->value("max_abs_error", -1.0) : -1.0);
  verdict(1, r.error.empty() && r.result.pass, r.seconds, 1.0, buf);
}

void criterion2() {
  const Run& r = run("horosphere");
  const bool ok = r.error.empty() && r.result.pass && check_pass(r, "leaf_convexity") && check_pass(r, "sweep_outcome");
  verdict(2, ok, r.seconds, 30.0, "50 leaves x 1000 samples, sweep exits through the eps-leaf");
}

void criterion3() {
  const Run& a = run("liouville_disk");
  const Run& b = run("liouville_constant");
  const bool ok = a.error.empty() && b.error.empty() && a.result.pass && b.result.pass;
  verdict(3, ok, a.seconds + b.seconds, 10.0, "image diameter <= delta + 1e-9, constant energy < 1e-18");
}

void criterion4() {
  const Run& s = run("perturbed_cone_sweep");
  const Run& c = run("cone_enclosure");
  bool ok = s.error.empty() && s.result.pass;
  for (const char* name : {"classical", "log_cone", "xsinx_upper", "xsinx_lower"}) {
    const Json* e = check(c, std::string("enclosure:") + name);
    ok = ok && e && e->at("pass").get<bool>() && e->value("found", false);
  }
  const Json* h = check(c, "enclosure:halfspace");
  ok = ok && h && h->at("pass").get<bool>() && !h->value("found", true) && h->value("error", "") == "EnclosureNotFound";
  verdict(4, ok, s.seconds + c.seconds, 20.0, "sweep exits, enclosures found, halfspace EnclosureNotFound");
}

void criterion5() {
  const Run& c = run("cone_enclosure");
  const Run& d = run("cone_degenerate");
  bool ok = true;
  for (const char* name : {"classical", "log_cone", "xsinx_upper", "xsinx_lower", "two_ray"}) {
    const Json* l = check(c, std::string("affine_line:") + name);
    ok = ok && l && l->at("probes") == 10000 && !l->value("line_found", true);
  }
  const Json* z = check(d, "affine_line:two_ray");
  ok = ok && z && z->value("line_found", false);
  double seconds = 0.0;
  for (const Run* r : {&c, &d}) {
    for (const auto& [stage, t] : r->result.timings.at("seconds").items()) {
      if (stage.rfind("lines:", 0) == 0) seconds += t.get<double>();
    }
  }
  verdict(5, ok, seconds, 5.0, "1e4 probes, horizon 1e3: no line for theta > 0, line for theta = 0");
}

void criterion6() {
  const Run& r = run("ball_containment");
  verdict(6, r.error.empty() && r.result.pass, r.seconds, 5.0, "containment verdict equals r' >= 1 on 100 pairs per radius");
}

void criterion7() {
  const Run& r = run("riemannian_cones");
  bool ok = r.error.empty() && r.result.pass;
  for (const char* name : {"euclidean_plane", "hyperbolic_plane", "hyperbolic_times_line", "torus_times_line",
                            "sphere_times_line"}) ok = ok && check_pass(r, std::string("cone:") + name);
  const Json* neg = check(r, "cone:double_radius");
  ok = ok && neg && neg->at("pass").get<bool>() && neg->value("verdict", "") == "RadiusViolation";
  verdict(7, ok, r.seconds, 60.0, "cones a-e valid, r(t) = 2t RadiusViolation");
}

void criterion8() {
  const Run& r = run("subharmonicity");
  verdict(8, r.error.empty() && r.result.pass && check_pass(r, "flat_quadratic"), r.seconds, 0.0,
          "h in {1/16, 1/32, 1/64}, flat quadratic = 4");
}

void criterion9() {
  const Run& a = run("annulus_leafspace");
  const Run& b = run("branched_leafspace");
  const bool ok = check_pass(a, "leaf_space") && check_pass(b, "leaf_space");
  verdict(9, ok, a.seconds + b.seconds, 0.0, "annulus 2/1, branched encoding 9/8 acyclic tree");
}

void criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> differ;
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".json") continue;
    const std::string name = entry.path().stem().string();
    const Run& first = run(name);
    std::string second;
    try {
      second = run_scenario(load_scenario(entry.path())).report.dump(2);
    } catch (const Error& e) {
      second = std::string("error: ") + e.what();
    }
    const std::string a = first.error.empty() ? first.result.report.dump(2) : "error: " + first.error;
    if (a != second) differ.push_back(name);
    ++n;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = std::to_string(n) + " scenarios, " + std::to_string(differ.size()) + " differ";
  for (const auto& d : differ) detail += " " + d;
  verdict(10, differ.empty() && n > 0, seconds, 0.0, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
