#include "hmcone/cones.hpp"
#include "hmcone/foliation.hpp"
#include "hmcone/harmonic.hpp"
#include "hmcone/hypersurface.hpp"
#include "hmcone/mesh.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace hmcone;

std::vector<Vec> disk_samples(std::size_t n, double radius) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-radius, radius);
  std::vector<Vec> out;
  while (out.size() < n) {
    Vec x(2);
    x << unif(rng), unif(rng);
    if (x.norm() < radius) out.push_back(x);
  }
  return out;
}

void BM_Certify(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const GraphFunction g = sphere_beyond_infinity(2.0, 2);
  const auto samples = disk_samples(100000, 0.99 * std::sqrt(3.0) * 2.0);
  const ModelSpace h3 = ModelSpace::hyperbolic(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_strict_convexity(g, h3, samples, 1e-8, parallel));
  }
}

void BM_Separation(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const Foliation f = annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(separating_check(f, 1.5, 256, parallel));
  }
}

void BM_Tension(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const MeshDomain mesh = disk_mesh(128);
  MeshMap f;
  f.target = ModelSpace::hyperbolic(2);
  for (const Vec& v : mesh.vertices) {
    Vec x(2);
    x << v(0), 2.0 + v(1);
    f.images.push_back(x);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_tension(mesh, f, parallel));
  }
}

void BM_LineProbes(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const PerturbedCone cone = log_cone();
  for (auto _ : state) {
    benchmark::DoNotOptimize(affine_line_check(cone, 10000, 1000.0, 1, parallel));
  }
}

}  // namespace

BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Separation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Tension)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LineProbes)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
