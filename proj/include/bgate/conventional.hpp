// Transmit-then-compute baseline: decode each input from its own channel,
// then apply the noiseless gate.
#pragma once

#include <cstdint>
#include <vector>

#include "bgate/bayes_gate.hpp"
#include "bgate/channel.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

enum class ChannelDecoder {
  Bayesian,   // two-state filter per channel, posterior thresholded at 1/2
  Threshold,  // raw sample thresholded at the level midpoint
};

/// Streams the conventional output; `on_step(k, bit)`.
template <typename Visitor>
void run_conventional(const SignalPath& u1, const SignalPath& u2, const BinaryChannelModel& model, GateKind kind,
                      ChannelDecoder decoder, Visitor&& on_step) {
  require_same_grid(u1.grid, u2.grid, "run_conventional");
  if (decoder == ChannelDecoder::Threshold) {
    for (std::size_t k = 0; k < u1.size(); ++k) {
      on_step(k, ideal_gate(u1[k] > 0.0, u2[k] > 0.0, kind));
    }
    return;
  }
  const BinaryFilterStepper stepper(model, u1.grid.dt());
  FilterStats stats;
  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t k = 0; k < u1.size(); ++k) {
    l1 = stepper.step(l1, u1[k], stats);
    l2 = stepper.step(l2, u2[k], stats);
    // p > 1/2 exactly when the log-odds are positive
    on_step(k, ideal_gate(l1 > 0.0, l2 > 0.0, kind));
  }
}

inline BooleanPath run_conventional(const SignalPath& u1, const SignalPath& u2, const BinaryChannelModel& model,
                                    GateKind kind, ChannelDecoder decoder = ChannelDecoder::Bayesian) {
  BooleanPath out{u1.grid, std::vector<std::uint8_t>(u1.size())};
  run_conventional(u1, u2, model, kind, decoder, [&](std::size_t k, std::uint8_t bit) { out.samples[k] = bit; });
  return out;
}

}  // namespace bgate
