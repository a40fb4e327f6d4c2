// Hidden logical inputs: two-state Markov (telegraph) paths, their
// aggregation into the three-state process chi, and noiseless truth tables.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bgate/simgrid.hpp"

namespace bgate {

enum class GateKind { NOR, XOR, AND, OR, NAND };

inline constexpr std::array<GateKind, 5> kAllGateKinds = {GateKind::NOR, GateKind::XOR, GateKind::AND,
                                                          GateKind::OR, GateKind::NAND};

constexpr std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::NOR: return "nor";
    case GateKind::XOR: return "xor";
    case GateKind::AND: return "and";
    case GateKind::OR: return "or";
    case GateKind::NAND: return "nand";
  }
  return "?";
}

inline std::optional<GateKind> parse_gate_kind(std::string_view name) noexcept {
  for (GateKind k : kAllGateKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

/// The gate whose truth table is the negation of `kind`, if it is one of ours.
constexpr std::optional<GateKind> complement(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::NOR: return GateKind::OR;
    case GateKind::OR: return GateKind::NOR;
    case GateKind::AND: return GateKind::NAND;
    case GateKind::NAND: return GateKind::AND;
    case GateKind::XOR: return std::nullopt;
  }
  return std::nullopt;
}

constexpr std::uint8_t ideal_gate(std::uint8_t x1, std::uint8_t x2, GateKind kind) noexcept {
  const bool a = x1 != 0;
  const bool b = x2 != 0;
  switch (kind) {
    case GateKind::NOR: return !(a || b);
    case GateKind::XOR: return a != b;
    case GateKind::AND: return a && b;
    case GateKind::OR: return a || b;
    case GateKind::NAND: return !(a && b);
  }
  return 0;
}

/// Gate output as a function of chi in {1,2,3}; every supported gate is
/// symmetric in its inputs, so chi determines it.
constexpr std::uint8_t ideal_gate_chi(std::uint8_t chi, GateKind kind) noexcept {
  // chi = 1 + x1 + x2; pick a representative input pair.
  const std::uint8_t x1 = chi >= 2 ? 1 : 0;
  const std::uint8_t x2 = chi == 3 ? 1 : 0;
  return ideal_gate(x1, x2, kind);
}

struct TelegraphParams {
  double r_on = 1e-3;   // 0 -> 1
  double r_off = 1e-3;  // 1 -> 0

  void validate() const {
    if (!(r_on >= 0.0) || !(r_off >= 0.0)) {
      throw std::invalid_argument("TelegraphParams: rates must be nonnegative");
    }
    if (r_on == 0.0 && r_off == 0.0) {
      throw std::invalid_argument("TelegraphParams: rates must not both be zero");
    }
  }

  double stationary_on() const { return r_on / (r_on + r_off); }
};

struct BooleanPath {
  SimGrid grid;
  std::vector<std::uint8_t> samples;

  std::size_t size() const noexcept { return samples.size(); }
  std::uint8_t operator[](std::size_t k) const noexcept { return samples[k]; }
};

struct ChiPath {
  SimGrid grid;
  std::vector<std::uint8_t> samples;  // values in {1,2,3}

  std::size_t size() const noexcept { return samples.size(); }
  std::uint8_t operator[](std::size_t k) const noexcept { return samples[k]; }
};

/// Largest admissible rate*dt for the per-step Bernoulli discretization.
inline constexpr double kMaxRateTimesDt = 0.1;

/// Per-step Bernoulli flips.  When `initial` is empty the first sample is drawn
/// from the stationary distribution.
inline BooleanPath sample_telegraph(const TelegraphParams& params, const SimGrid& grid, std::uint64_t seed,
                                    std::optional<std::uint8_t> initial = std::nullopt) {
  params.validate();
  const double p_on = params.r_on * grid.dt();
  const double p_off = params.r_off * grid.dt();
  if (p_on >= kMaxRateTimesDt || p_off >= kMaxRateTimesDt) {
    throw std::invalid_argument("sample_telegraph: rate*dt must stay below 0.1 (grid under-resolves switching)");
  }
  RandomStream rng(seed);
  BooleanPath path{grid, std::vector<std::uint8_t>(grid.n_steps())};
  std::uint8_t state = 0;
  if (initial) {
    state = *initial ? 1 : 0;
  } else {
    state = rng.uniform() < params.stationary_on() ? 1 : 0;
  }
  for (std::size_t k = 0; k < path.samples.size(); ++k) {
    if (k > 0) {
      const double u = rng.uniform();
      if (state == 0 ? u < p_on : u < p_off) state ^= 1;
    }
    path.samples[k] = state;
  }
  return path;
}

/// Exact piecewise-constant path from (duration, bit) segments.  Switch times
/// are snapped to the nearest grid point.
inline BooleanPath deterministic_schedule(const std::vector<std::pair<double, int>>& segments, const SimGrid& grid) {
  double total = 0.0;
  for (const auto& [duration, bit] : segments) {
    if (!(duration > 0.0)) throw std::invalid_argument("deterministic_schedule: durations must be positive");
    if (bit != 0 && bit != 1) throw std::invalid_argument("deterministic_schedule: bits must be 0 or 1");
    total += duration;
  }
  if (std::abs(total - grid.t_end()) > 1e-9 * grid.t_end()) {
    throw std::invalid_argument("deterministic_schedule: segment durations sum to " + std::to_string(total) +
                                ", grid horizon is " + std::to_string(grid.t_end()));
  }
  BooleanPath path{grid, std::vector<std::uint8_t>(grid.n_steps())};
  double start = 0.0;
  std::size_t k = 0;
  for (const auto& [duration, bit] : segments) {
    start += duration;
    const auto end = std::min<std::size_t>(static_cast<std::size_t>(std::llround(start / grid.dt())), grid.n_steps());
    for (; k < end; ++k) path.samples[k] = static_cast<std::uint8_t>(bit);
  }
  return path;
}

inline ChiPath aggregate_chi(const BooleanPath& x1, const BooleanPath& x2) {
  require_same_grid(x1.grid, x2.grid, "aggregate_chi");
  ChiPath chi{x1.grid, std::vector<std::uint8_t>(x1.size())};
  for (std::size_t k = 0; k < chi.samples.size(); ++k) {
    chi.samples[k] = static_cast<std::uint8_t>(1 + x1[k] + x2[k]);
  }
  return chi;
}

/// Noiseless gate output along a pair of input paths.
inline BooleanPath truth_path(const BooleanPath& x1, const BooleanPath& x2, GateKind kind) {
  require_same_grid(x1.grid, x2.grid, "truth_path");
  BooleanPath out{x1.grid, std::vector<std::uint8_t>(x1.size())};
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = ideal_gate(x1[k], x2[k], kind);
  return out;
}

inline BooleanPath truth_path(const ChiPath& chi, GateKind kind) {
  BooleanPath out{chi.grid, std::vector<std::uint8_t>(chi.size())};
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = ideal_gate_chi(chi[k], kind);
  return out;
}

}  // namespace bgate
