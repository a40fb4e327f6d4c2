// Uniform time grid and deterministic random streams shared by every
// simulation in the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgate {

/// Uniform discretization of [0, t_end] with step dt.
class SimGrid {
 public:
  SimGrid(double dt, double t_end) : dt_(dt), t_end_(t_end) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw std::invalid_argument("SimGrid: dt must be positive and finite");
    }
    if (!(t_end >= dt) || !std::isfinite(t_end)) {
      throw std::invalid_argument("SimGrid: t_end must be finite and >= dt");
    }
    const double ratio = t_end / dt;
    n_steps_ = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(static_cast<double>(n_steps_) * dt - t_end) > 1e-9 * t_end) {
      throw std::invalid_argument("SimGrid: t_end is not an integer multiple of dt");
    }
  }

  double dt() const noexcept { return dt_; }
  double t_end() const noexcept { return t_end_; }
  std::size_t n_steps() const noexcept { return n_steps_; }

  /// Time at the end of step k (the instant the k-th observation is complete).
  double time(std::size_t k) const noexcept { return static_cast<double>(k + 1) * dt_; }

  /// First step index whose end time exceeds t.
  std::size_t index_after(double t) const noexcept {
    if (t <= 0.0) return 0;
    const auto k = static_cast<std::size_t>(std::ceil(t / dt_ - 1e-9));
    return k < n_steps_ ? k : n_steps_;
  }

  friend bool operator==(const SimGrid& a, const SimGrid& b) noexcept {
    return a.dt_ == b.dt_ && a.n_steps_ == b.n_steps_;
  }

 private:
  double dt_;
  double t_end_;
  std::size_t n_steps_ = 0;
};

inline void require_same_grid(const SimGrid& a, const SimGrid& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

/// Coordinates of an independent random stream.  `stream` distinguishes the
/// several draws a single replicate needs (input 1, input 2, channel noise...).
struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t experiment = 0;
  std::uint64_t cell = 0;
  std::uint64_t replicate = 0;
  std::uint64_t stream = 0;
};

namespace detail {

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Pure hash of (base_seed, coordinates).  Each coordinate is absorbed through
/// a bijective mixing round, so tuples differing in one coordinate never
/// collide and the result is identical on every platform.
constexpr std::uint64_t derive_seed(const SeedSpec& spec) noexcept {
  std::uint64_t h = detail::mix64(spec.base_seed);
  for (std::uint64_t c : {spec.experiment, spec.cell, spec.replicate, spec.stream}) {
    h = detail::mix64(h ^ detail::mix64(c + 0x632be59bd9b4e019ULL));
  }
  return h;
}

/// Random stream seeded from a derived seed.  The engine is std::mt19937_64,
/// whose output sequence is fixed by the standard; the uniform and normal
/// transforms are written out here because the std distributions are
/// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n_steps i.i.d. N(0,1) draws; scaling by sqrt(dt) is left to the caller.
inline std::vector<double> gaussian_increments(const SimGrid& grid, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> out(grid.n_steps());
  for (auto& x : out) x = rng.normal();
  return out;
}

}  // namespace bgate
