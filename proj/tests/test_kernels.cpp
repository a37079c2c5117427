#include "hmcone/grid.hpp"
#include "hmcone/kernels.hpp"

#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

using namespace hmcone;

namespace {

double wiggle(std::size_t i) { return std::sin(0.37 * static_cast<double>(i)) * std::exp(-1e-4 * i); }

std::vector<char> pattern(const GridSpec& g, const char* rows[]) {
  std::vector<char> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto ij = g.unflatten(k);
    out[k] = rows[ij[1]][ij[0]] == '#' ? 1 : 0;
  }
  return out;
}

}  // namespace

TEST_CASE("min_reduce: serial and parallel are bit-identical") {
  for (std::size_t n : {1u, 7u, 1000u, 100003u}) {
    const auto a = kernels::serial::min_reduce(n, wiggle);
    const auto b = kernels::parallel::min_reduce(n, wiggle);
    CHECK(a.value == b.value);
    CHECK(a.index == b.index);
  }
  // Ties resolve to the smallest index.
  const auto t = kernels::parallel::min_reduce(100, [](std::size_t i) { return i % 10 == 3 ? -1.0 : 0.0; });
  CHECK(t.index == 3);
  CHECK(kernels::serial::min_reduce(0, wiggle).value == std::numeric_limits<double>::infinity());
}

TEST_CASE("mask and map: serial and parallel are bit-identical") {
  const std::size_t n = 50001;
  CHECK(kernels::serial::map(n, wiggle) == kernels::parallel::map(n, wiggle));
  const auto pos = [](std::size_t i) { return wiggle(i) > 0.1; };
  CHECK(kernels::serial::mask(n, pos) == kernels::parallel::mask(n, pos));
}

TEST_CASE("the exception at the smallest index is rethrown") {
  const auto fn = [](std::size_t i) -> double {
    if (i % 97 == 41) throw std::runtime_error("bad " + std::to_string(i));
    return 0.0;
  };
  for (bool par : {false, true}) {
    try {
      kernels::min_reduce(par, 10000, fn);
      FAIL("expected throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "bad 41");
    }
    try {
      kernels::map(par, 10000, fn);
      FAIL("expected throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "bad 41");
    }
    CHECK_THROWS_AS(kernels::mask(par, 10000, [&](std::size_t i) { return fn(i) > 0.0; }), std::runtime_error);
  }
}

TEST_CASE("grid indexing round trip") {
  Vec lo(3), hi(3);
  lo << -1, 0, 2;
  hi << 1, 4, 3;
  const GridSpec g = GridSpec::uniform(lo, hi, 5);
  CHECK(g.size() == 125);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(g.locate(g.cell_center(k)) == k);
  Vec out = lo;
  out(0) = -2.0;
  CHECK(g.locate(out) == g.size());
}

TEST_CASE("component labelling on a known pattern") {
  const char* rows[] = {
      "##..#",
      "#...#",
      "..#..",
      "....#",
      "##.##",
  };
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 5.0);
  const GridSpec g = GridSpec::uniform(lo, hi, 5);
  const GridComponents c = label_components(g, pattern(g, rows));
  REQUIRE(c.count == 5);
  CHECK(c.sizes == std::vector<std::size_t>{3, 2, 1, 3, 2});
  CHECK(c.touches_border == std::vector<bool>{true, true, false, true, true});
  CHECK(c.label[0] == 0);
  CHECK(c.label[12] == 2);
  CHECK(c.label[7] == -1);
}

TEST_CASE("erosion keeps cells with all face neighbours active") {
  const char* rows[] = {
      "#####",
      "#####",
      "####.",
      "#####",
      "#####",
  };
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 5.0);
  const GridSpec g = GridSpec::uniform(lo, hi, 5);
  const auto e = erode(g, pattern(g, rows));
  std::size_t alive = 0;
  for (char v : e) alive += v;
  // Interior 3x3 block minus the cell next to the hole.
  CHECK(alive == 8);
  CHECK(e[2 * 5 + 3] == 0);
  CHECK(e[1 * 5 + 1] == 1);
}
