// Noisy physical observations.  A sample is the step-averaged signal
// level + noise * xi / sqrt(dt), so its per-step variance is noise^2 / dt.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bgate/simgrid.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

struct ChannelParams {
  double mu = 1.0;      // amplitude; logical levels are +-mu/2
  double sigma = 0.75;  // per-channel noise intensity
  double q = 0.0;       // 0: single-channel noise, 1: two summed channels

  void validate() const {
    if (!std::isfinite(mu)) throw std::invalid_argument("ChannelParams: mu must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("ChannelParams: sigma must be positive");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("ChannelParams: q must lie in [0, 1]");
  }

  /// Noise intensity of the combined signal, sigma * sqrt(1 + q).
  double sigma0() const noexcept { return sigma * std::sqrt(1.0 + q); }
};

struct SignalPath {
  SimGrid grid;
  std::vector<double> samples;

  std::size_t size() const noexcept { return samples.size(); }
  double operator[](std::size_t k) const noexcept { return samples[k]; }
};

constexpr double level(std::uint8_t bit, double mu) noexcept { return bit ? 0.5 * mu : -0.5 * mu; }

/// Mean of the summed signal in aggregated state chi in {1,2,3}.
constexpr double nu(std::uint8_t chi, double mu) noexcept { return static_cast<double>(chi - 2) * mu; }

namespace detail {

template <typename Path, typename MeanFn>
SignalPath emit(const Path& truth, double noise, std::span<const double> normals, MeanFn mean) {
  if (normals.size() != truth.size()) throw std::invalid_argument("emit: normal draws do not match the grid");
  const double scale = noise / std::sqrt(truth.grid.dt());
  SignalPath out{truth.grid, std::vector<double>(truth.size())};
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = mean(truth[k]) + scale * normals[k];
  return out;
}

}  // namespace detail

/// U(t) for one input: level(x_k) + sigma * xi_k / sqrt(dt).
inline SignalPath emit_physical(const BooleanPath& x, const ChannelParams& params, std::span<const double> normals) {
  params.validate();
  return detail::emit(x, params.sigma, normals, [mu = params.mu](std::uint8_t b) { return level(b, mu); });
}

inline SignalPath emit_physical(const BooleanPath& x, const ChannelParams& params, std::uint64_t seed) {
  const auto normals = gaussian_increments(x.grid, seed);
  return emit_physical(x, params, normals);
}

/// I(t) from a single noise stream scaled to sigma0 = sigma * sqrt(1 + q).
inline SignalPath emit_combined(const ChiPath& chi, const ChannelParams& params, std::span<const double> normals) {
  params.validate();
  return detail::emit(chi, params.sigma0(), normals, [mu = params.mu](std::uint8_t c) { return nu(c, mu); });
}

inline SignalPath emit_combined(const ChiPath& chi, const ChannelParams& params, std::uint64_t seed) {
  const auto normals = gaussian_increments(chi.grid, seed);
  return emit_combined(chi, params, normals);
}

/// Noise-free I(t) = nu(chi_k); the sigma0 -> 0 limit used for delay errors.
inline SignalPath emit_noiseless(const ChiPath& chi, double mu) {
  SignalPath out{chi.grid, std::vector<double>(chi.size())};
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = nu(chi[k], mu);
  return out;
}

inline SignalPath sum_signals(const SignalPath& u1, const SignalPath& u2) {
  require_same_grid(u1.grid, u2.grid, "sum_signals");
  SignalPath out{u1.grid, std::vector<double>(u1.size())};
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = u1[k] + u2[k];
  return out;
}

}  // namespace bgate
