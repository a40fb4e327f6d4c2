#include <catch2/catch_amalgamated.hpp>

#include "bgate/metrics.hpp"

using namespace bgate;
using Catch::Approx;

TEST_CASE("error rate edge cases") {
  const SimGrid grid(1.0, 8.0);
  const BooleanPath truth{grid, {0, 1, 1, 0, 1, 0, 0, 1}};
  AnalogPath same{grid, {}};
  AnalogPath flipped{grid, {}};
  for (auto b : truth.samples) {
    same.samples.push_back(b);
    flipped.samples.push_back(1.0 - b);
  }
  CHECK(error_rate(same, 0.5, truth) == 0.0);
  CHECK(error_rate(flipped, 0.5, truth) == 1.0);
  CHECK(error_rate(flipped, 0.5, truth, 4) == 1.0);
  CHECK_THROWS_AS(error_rate(same, 0.5, truth, 8), std::invalid_argument);
  CHECK(error_rate(BooleanPath{grid, {0, 1, 1, 0, 1, 0, 0, 0}}, truth) == 0.125);
}

TEST_CASE("constant output below threshold scores the NOR occupancy") {
  const SimGrid grid(0.1, 2e6);
  const TelegraphParams rates{1e-3, 1e-3};
  const auto chi = aggregate_chi(sample_telegraph(rates, grid, 1), sample_telegraph(rates, grid, 2));
  const AnalogPath constant{grid, std::vector<double>(grid.n_steps(), 0.5 - 1e-9)};
  CHECK(error_rate(constant, kPosteriorThreshold, truth_path(chi, GateKind::NOR)) == Approx(0.25).margin(0.02));
}

TEST_CASE("complementary readouts have equal error") {
  const SimGrid grid(0.1, 2e4);
  const TelegraphParams rates{1e-3, 1e-3};
  const auto chi = aggregate_chi(sample_telegraph(rates, grid, 3), sample_telegraph(rates, grid, 4));
  const auto signal = emit_combined(chi, {1.0, 0.75, 0.0}, 5);
  const auto er = bayes_gate_error_rates(signal, chi, GateModel(1.0, 0.75, 1e-3, 1e-3),
                                         {GateKind::NOR, GateKind::OR, GateKind::AND, GateKind::NAND}, 1000);
  CHECK(er[0] == er[1]);
  CHECK(er[2] == er[3]);
}

TEST_CASE("performance ratio") {
  CHECK(performance_ratio(0.02, 0.02).eta == 1.0);
  CHECK(*performance_ratio(0.01, 0.02).eta == Approx(0.5));
  CHECK_FALSE(performance_ratio(0.01, 0.0).eta.has_value());
  const auto rep = ErrorReport::from(0.01, 0.012);
  CHECK(rep.excess_er == Approx(-0.002));
}

TEST_CASE("burn-in default") {
  CHECK(default_burn_in({1e-3, 1e-3}) == Approx(5000.0));
  CHECK(default_burn_in({1e-3, 0.0}) == Approx(5000.0));
}

TEST_CASE("delay error") {
  const SimGrid grid(0.1, 1e5);
  SECTION("static inputs give no delay error") {
    const TelegraphParams frozen{1e-12, 1e-12};
    const auto chi = aggregate_chi(sample_telegraph(frozen, grid, 6), sample_telegraph(frozen, grid, 7));
    CHECK(delay_error(GateModel(1.0, 0.75, 1e-12, 1e-12), GateKind::NOR, chi, 1.0, 1000) == 0.0);
  }
  SECTION("grows with the assumed noise") {
    const TelegraphParams rates{1e-3, 1e-3};
    const auto chi = aggregate_chi(sample_telegraph(rates, grid, 8), sample_telegraph(rates, grid, 9));
    double prev = -1.0;
    for (double s : {1e-3, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2}) {
      const double ed = delay_error(GateModel(1.0, s, 1e-3, 1e-3), GateKind::NOR, chi, 1.0, 0);
      CHECK(ed >= prev);
      prev = ed;
    }
    // floor: at most a step or two per switch
    std::size_t switches = 0;
    for (std::size_t k = 1; k < chi.size(); ++k) switches += chi[k] != chi[k - 1];
    const double floor = delay_error(GateModel(1.0, 1e-3, 1e-3, 1e-3), GateKind::NOR, chi, 1.0, 0);
    CHECK(floor <= 2.0 * static_cast<double>(switches + 1) / static_cast<double>(chi.size()));
  }
}
