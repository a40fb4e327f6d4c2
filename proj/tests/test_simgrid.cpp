#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "bgate/simgrid.hpp"

using namespace bgate;
using Catch::Approx;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(SimGrid(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SimGrid(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SimGrid(0.1, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(SimGrid(0.3, 1.0), std::invalid_argument);
  const SimGrid g(0.1, 2e5);
  CHECK(g.n_steps() == 2'000'000);
  CHECK(g.time(0) == Approx(0.1));
  CHECK(g.index_after(5000.0) == 50'000);
  CHECK(g.index_after(0.0) == 0);
  CHECK(g.index_after(1e9) == g.n_steps());
}

TEST_CASE("derived seeds are deterministic and distinct") {
  CHECK(derive_seed({42, 1, 2, 3, 4}) == derive_seed({42, 1, 2, 3, 4}));
  CHECK(derive_seed({42, 0, 0, 0, 0}) != derive_seed({42, 0, 0, 0, 1}));
  CHECK(derive_seed({42, 0, 0, 1, 0}) != derive_seed({42, 0, 0, 0, 1}));
  CHECK(derive_seed({42, 1, 0, 0, 0}) != derive_seed({43, 1, 0, 0, 0}));

  std::set<std::uint64_t> seen;
  std::size_t n = 0;
  for (std::uint64_t e = 0; e < 4; ++e)
    for (std::uint64_t c = 0; c < 10; ++c)
      for (std::uint64_t r = 0; r < 5; ++r)
        for (std::uint64_t s = 0; s < 5; ++s, ++n) seen.insert(derive_seed({7, e, c, r, s}));
  CHECK(n == 1000);
  CHECK(seen.size() == n);
}

TEST_CASE("gaussian increments have standard moments") {
  const SimGrid g(1.0, 1e6);
  const auto xs = gaussian_increments(g, derive_seed({1, 0, 0, 0, 0}));
  REQUIRE(xs.size() == 1'000'000);
  double sum = 0.0, sq = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  for (double x : xs) sq += (x - mean) * (x - mean);
  const double var = sq / static_cast<double>(xs.size() - 1);
  CHECK(std::abs(mean) < 5e-3);
  CHECK(std::abs(var - 1.0) < 0.01);
  CHECK(gaussian_increments(g, derive_seed({1, 0, 0, 0, 0})) == xs);
}

TEST_CASE("uniform draws stay in [0, 1)") {
  RandomStream rng(3);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(lo < 1e-3);
  CHECK(hi > 1.0 - 1e-3);
}
