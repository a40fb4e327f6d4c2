// Error rates, their delay/excess decomposition, and the performance ratio.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bgate/bayes_gate.hpp"
#include "bgate/channel.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

inline constexpr double kPosteriorThreshold = 0.5;
inline constexpr double kLsrThreshold = 0.0;

/// Time excluded from the start of every error-rate window: five mean dwell
/// times of the slower switching direction.  Zero-rate directions are ignored;
/// static inputs get no burn-in.
inline double default_burn_in(const TelegraphParams& params) noexcept {
  double slowest = std::numeric_limits<double>::infinity();
  for (double r : {params.r_on, params.r_off}) {
    if (r > 0.0) slowest = std::min(slowest, r);
  }
  return std::isfinite(slowest) ? 5.0 / slowest : 0.0;
}

/// Running count of disagreements between a thresholded output and the truth,
/// restricted to steps k >= first.
class ErrorCounter {
 public:
  explicit ErrorCounter(std::size_t first = 0) : first_(first) {}

  void add(std::size_t k, bool output, bool truth) noexcept {
    if (k < first_) return;
    ++total_;
    errors_ += output != truth;
  }

  std::uint64_t errors() const noexcept { return errors_; }
  std::uint64_t total() const noexcept { return total_; }
  double rate() const noexcept { return total_ ? static_cast<double>(errors_) / static_cast<double>(total_) : 0.0; }

 private:
  std::size_t first_;
  std::uint64_t errors_ = 0;
  std::uint64_t total_ = 0;
};

/// Fraction of steps (from `burn_in_steps` on) where 1[analog > a_th]
/// disagrees with the truth path.
inline double error_rate(const AnalogPath& analog, double a_th, const BooleanPath& truth,
                         std::size_t burn_in_steps = 0) {
  require_same_grid(analog.grid, truth.grid, "error_rate");
  if (burn_in_steps >= truth.size()) throw std::invalid_argument("error_rate: burn-in covers the whole horizon");
  ErrorCounter counter(burn_in_steps);
  for (std::size_t k = 0; k < truth.size(); ++k) counter.add(k, analog[k] > a_th, truth[k] != 0);
  return counter.rate();
}

/// Error rate of a binary output path (already thresholded).
inline double error_rate(const BooleanPath& output, const BooleanPath& truth, std::size_t burn_in_steps = 0) {
  require_same_grid(output.grid, truth.grid, "error_rate");
  if (burn_in_steps >= truth.size()) throw std::invalid_argument("error_rate: burn-in covers the whole horizon");
  ErrorCounter counter(burn_in_steps);
  for (std::size_t k = 0; k < truth.size(); ++k) counter.add(k, output[k] != 0, truth[k] != 0);
  return counter.rate();
}

/// Error rates of several gate readouts of the same posterior trajectory.
inline std::vector<double> bayes_gate_error_rates(const SignalPath& signal, const ChiPath& chi,
                                                  const GateModel& model, const std::vector<GateKind>& kinds,
                                                  std::size_t burn_in_steps, FilterStats* stats = nullptr) {
  require_same_grid(signal.grid, chi.grid, "bayes_gate_error_rates");
  if (burn_in_steps >= chi.size()) throw std::invalid_argument("error_rate: burn-in covers the whole horizon");
  std::vector<ErrorCounter> counters(kinds.size(), ErrorCounter(burn_in_steps));
  const auto s = run_filter(signal, model, Posterior::uniform(), [&](std::size_t k, const Posterior& p) {
    if (k < burn_in_steps) return;
    const Vec3 z = p.z();
    for (std::size_t g = 0; g < kinds.size(); ++g) {
      counters[g].add(k, readout(z, kinds[g]) > kPosteriorThreshold, ideal_gate_chi(chi[k], kinds[g]) != 0);
    }
  });
  if (stats) stats->saturations += s.saturations;
  std::vector<double> out;
  out.reserve(kinds.size());
  for (const auto& c : counters) out.push_back(c.rate());
  return out;
}

/// Switching-delay error: the same experiment with a noiseless input,
/// I(t) = nu(chi(t)), while the gate keeps its assumed sigma0*.
inline std::vector<double> delay_error_rates(const GateModel& model, const std::vector<GateKind>& kinds,
                                             const ChiPath& chi, double mu, std::size_t burn_in_steps,
                                             FilterStats* stats = nullptr) {
  return bayes_gate_error_rates(emit_noiseless(chi, mu), chi, model, kinds, burn_in_steps, stats);
}

inline double delay_error(const GateModel& model, GateKind kind, const ChiPath& chi, double mu,
                          std::size_t burn_in_steps) {
  return delay_error_rates(model, {kind}, chi, mu, burn_in_steps).front();
}

/// Delay error over independently seeded telegraph inputs.
inline double delay_error(const GateModel& model, GateKind kind, const SimGrid& grid, const TelegraphParams& rates,
                          double mu, std::uint64_t seed_x1, std::uint64_t seed_x2) {
  const auto chi = aggregate_chi(sample_telegraph(rates, grid, seed_x1), sample_telegraph(rates, grid, seed_x2));
  return delay_error(model, kind, chi, mu, grid.index_after(default_burn_in(rates)));
}

struct PerformanceRatio {
  double er_bg = 0.0;
  double er_usual = 0.0;
  std::optional<double> eta;  // empty when er_usual == 0
};

inline PerformanceRatio performance_ratio(double er_bg, double er_usual) noexcept {
  PerformanceRatio r{er_bg, er_usual, std::nullopt};
  if (er_usual > 0.0) r.eta = er_bg / er_usual;
  return r;
}

/// Error statistics of one gate in one experiment.  excess_er is recorded as
/// total - delay and may come out slightly negative from Monte Carlo error.
struct ErrorReport {
  double total_er = 0.0;
  double delay_er = 0.0;
  double excess_er = 0.0;
  std::optional<double> eta;
  std::uint64_t saturations = 0;

  static ErrorReport from(double total, double delay) noexcept { return {total, delay, total - delay, {}, 0}; }
};

}  // namespace bgate
