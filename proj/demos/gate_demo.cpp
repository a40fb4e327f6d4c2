// Runs each gate kind on one noisy summed signal and prints its error rate,
// next to the LSR gate for OR/NOR.
#include <cstdio>

#include "bgate/bgate.hpp"

int main() {
  using namespace bgate;
  const SimGrid grid(0.1, 2e4);
  const TelegraphParams rates{1e-3, 1e-3};
  const ChannelParams channel{1.0, 0.75, 0.0};
  const ChiPath chi = aggregate_chi(sample_telegraph(rates, grid, derive_seed({7, 0, 0, 0, 0})),
                                    sample_telegraph(rates, grid, derive_seed({7, 0, 0, 0, 1})));
  const SignalPath signal = emit_combined(chi, channel, derive_seed({7, 0, 0, 0, 2}));
  const GateModel model(channel.mu, channel.sigma0(), rates.r_on, rates.r_off);
  const std::size_t burn = grid.index_after(default_burn_in(rates));

  const PosteriorPath posterior = run_filter(signal, model);
  const AnalogPath y = run_lsr(signal, LsrParams{});
  for (GateKind g : kAllGateKinds) {
    const BooleanPath truth = truth_path(chi, g);
    std::printf("%-4s  bayes %.5f", std::string(to_string(g)).c_str(),
                error_rate(gate_readout(posterior, g), kPosteriorThreshold, truth, burn));
    if (g == GateKind::OR || g == GateKind::NOR) {
      AnalogPath a = y;
      for (double& v : a.samples) v = lsr_readout(v, g, LsrParams{});
      std::printf("  lsr %.5f", error_rate(a, kLsrThreshold, truth, burn));
    }
    std::printf("\n");
  }
}
