#include <catch2/catch_amalgamated.hpp>

#include "bgate/conventional.hpp"
#include "bgate/metrics.hpp"

using namespace bgate;
using Catch::Approx;

namespace {

struct Inputs {
  BooleanPath x1, x2;
};

Inputs random_inputs(const SimGrid& grid, std::uint64_t seed) {
  const TelegraphParams rates{1e-3, 1e-3};
  return {sample_telegraph(rates, grid, derive_seed({seed, 0, 0, 0, 0})),
          sample_telegraph(rates, grid, derive_seed({seed, 0, 0, 0, 1}))};
}

std::size_t switches(const BooleanPath& x) {
  std::size_t n = 0;
  for (std::size_t k = 1; k < x.size(); ++k) n += x[k] != x[k - 1];
  return n;
}

}  // namespace

TEST_CASE("noiseless channels reproduce the ideal gate") {
  const SimGrid grid(0.1, 5e4);
  const auto in = random_inputs(grid, 1);
  const ChannelParams clean{1.0, 1e-9, 0.0};
  const auto u1 = emit_physical(in.x1, clean, 2);
  const auto u2 = emit_physical(in.x2, clean, 3);
  const BinaryChannelModel model{1.0, 0.05, 1e-3, 1e-3};
  for (GateKind g : kAllGateKinds) {
    const auto truth = truth_path(in.x1, in.x2, g);
    CHECK(error_rate(run_conventional(u1, u2, model, g, ChannelDecoder::Threshold), truth) == 0.0);
    const auto out = run_conventional(u1, u2, model, g, ChannelDecoder::Bayesian);
    std::size_t wrong = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) wrong += out[k] != truth[k];
    // at most a couple of steps of lag per input switch
    CHECK(wrong <= 2 * (switches(in.x1) + switches(in.x2)) + 2);
  }
}

TEST_CASE("symmetric gates do not depend on channel order") {
  const SimGrid grid(0.1, 2e4);
  const auto in = random_inputs(grid, 4);
  const ChannelParams p{1.0, 0.75, 0.0};
  const auto u1 = emit_physical(in.x1, p, 5);
  const auto u2 = emit_physical(in.x2, p, 6);
  const BinaryChannelModel model{1.0, 0.75, 1e-3, 1e-3};
  for (GateKind g : kAllGateKinds) {
    CHECK(run_conventional(u1, u2, model, g, ChannelDecoder::Bayesian).samples ==
          run_conventional(u2, u1, model, g, ChannelDecoder::Bayesian).samples);
  }
}

TEST_CASE("very noisy channels approach the blind baseline") {
  // Once the decoded bits carry no information, the output is independent of
  // the truth with the same occupancy o, and errs with probability 2 o (1 - o).
  const SimGrid grid(0.1, 2e5);
  const auto in = random_inputs(grid, 7);
  const auto truth = truth_path(in.x1, in.x2, GateKind::NOR);
  double occupancy = 0.0;
  for (auto b : truth.samples) occupancy += b;
  occupancy /= static_cast<double>(truth.size());
  const double blind = 2.0 * occupancy * (1.0 - occupancy);
  std::vector<double> er;
  for (double sigma : {1.0, 10.0, 100.0}) {
    const ChannelParams p{1.0, sigma, 0.0};
    const auto u1 = emit_physical(in.x1, p, 8);
    const auto u2 = emit_physical(in.x2, p, 9);
    const BinaryChannelModel model{1.0, sigma, 1e-3, 1e-3};
    er.push_back(error_rate(run_conventional(u1, u2, model, GateKind::NOR, ChannelDecoder::Bayesian), truth));
  }
  INFO("er(1) = " << er[0] << ", er(10) = " << er[1] << ", er(100) = " << er[2] << ", blind = " << blind);
  CHECK(er[0] < er[1]);
  CHECK(er[1] < er[2]);
  CHECK(er[2] == Approx(blind).margin(0.05));
}
