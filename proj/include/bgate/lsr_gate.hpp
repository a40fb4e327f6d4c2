// Logical-stochastic-resonance gate: a bistable piecewise-linear system
// dy = [-alpha*y + beta*g(y) + I(t)] dt driven by the summed signal.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "bgate/bayes_gate.hpp"
#include "bgate/channel.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

struct LsrParams {
  double alpha = 1.8;
  double beta = 3.0;
  double y_lo = -0.5;
  double y_hi = 1.3;
  // Gate realized by 1[y > 0]; its complement is realized by 1[-y > 0].
  // The knees (-0.5, 1.3) give OR, and hence NOR.
  GateKind native = GateKind::OR;

  void validate() const {
    if (!(y_lo < y_hi)) throw std::invalid_argument("LsrParams: y_lo must be below y_hi");
    if (!(alpha > 0.0)) throw std::invalid_argument("LsrParams: alpha must be positive");
    if (!(beta > alpha)) throw std::invalid_argument("LsrParams: beta must exceed alpha for bistability");
    if (!complement(native)) throw std::invalid_argument("LsrParams: native gate must have a complement");
  }
};

constexpr double g_nonlinearity(double y, const LsrParams& p) noexcept { return std::clamp(y, p.y_lo, p.y_hi); }

constexpr double lsr_drift(double y, double i_sample, const LsrParams& p) noexcept {
  return -p.alpha * y + p.beta * g_nonlinearity(y, p) + i_sample;
}

/// Euler integration on the signal's grid; `on_step(k, y)` sees y after sample k.
template <typename Visitor>
void run_lsr(const SignalPath& signal, const LsrParams& params, double y0, Visitor&& on_step) {
  params.validate();
  const double dt = signal.grid.dt();
  double y = y0;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    y += dt * lsr_drift(y, signal[k], params);
    on_step(k, y);
  }
}

inline AnalogPath run_lsr(const SignalPath& signal, const LsrParams& params, double y0 = 0.0) {
  AnalogPath out{signal.grid, std::vector<double>(signal.size())};
  run_lsr(signal, params, y0, [&](std::size_t k, double y) { out.samples[k] = y; });
  return out;
}

/// Analog output for `kind`, thresholded at 0: y for the native gate, -y for
/// its complement.
inline double lsr_readout(double y, GateKind kind, const LsrParams& params) {
  if (kind == params.native) return y;
  if (complement(params.native) == kind) return -y;
  throw std::invalid_argument("lsr_readout: LSR configured for " + std::string(to_string(params.native)) +
                              " cannot realize " + std::string(to_string(kind)));
}

}  // namespace bgate
