// Three-state Bayesian gate: the Wonham filter for chi(t) observed through
// the summed signal I(t), integrated in log-odds coordinates relative to
// chi_3.  Also home to the brute-force discrete Bayes recursion used as an
// oracle, and the two-state filter used by the conventional baseline.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bgate/channel.hpp"
#include "bgate/simgrid.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Generator of chi for two independent telegraph inputs; entry [i][j] is the
/// rate from chi_{j+1} to chi_{i+1}.
inline Mat3 build_generator(double r_on, double r_off) {
  if (!(r_on >= 0.0) || !(r_off >= 0.0)) throw std::invalid_argument("build_generator: rates must be nonnegative");
  return {{{-2.0 * r_on, r_off, 0.0},
           {2.0 * r_on, -r_on - r_off, 2.0 * r_off},
           {0.0, r_on, -2.0 * r_off}}};
}

inline constexpr Mat3 kSignalCoupling = {{{0.0, -1.0, -2.0}, {1.0, 0.0, -1.0}, {2.0, 1.0, 0.0}}};
inline constexpr Mat3 kLevelCoupling = {{{0.0, -1.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, -1.0, 0.0}}};

/// Parameters the gate assumes about its input.  These may differ from the
/// true channel (mismatch study); the rates default to the true input rates.
class GateModel {
 public:
  GateModel(double mu_star, double sigma0_star, double r_on_star, double r_off_star)
      : mu_star_(mu_star), sigma0_star_(sigma0_star), r_on_star_(r_on_star), r_off_star_(r_off_star) {
    if (!std::isfinite(mu_star)) throw std::invalid_argument("GateModel: mu_star must be finite");
    if (!(sigma0_star > 0.0) || !std::isfinite(sigma0_star)) {
      throw std::invalid_argument("GateModel: sigma0_star must be positive");
    }
    generator_ = build_generator(r_on_star, r_off_star);
  }

  double mu_star() const noexcept { return mu_star_; }
  double sigma0_star() const noexcept { return sigma0_star_; }
  double r_on_star() const noexcept { return r_on_star_; }
  double r_off_star() const noexcept { return r_off_star_; }
  const Mat3& generator() const noexcept { return generator_; }
  static constexpr const Mat3& m1() noexcept { return kSignalCoupling; }
  static constexpr const Mat3& m2() noexcept { return kLevelCoupling; }

 private:
  double mu_star_;
  double sigma0_star_;
  double r_on_star_;
  double r_off_star_;
  Mat3 generator_{};
};

/// (mu*/sigma0*^2) * (i * M1 + (mu*/2) * M2); antisymmetric for every input.
inline Mat3 drift_b(double i_sample, const GateModel& model) {
  const double gain = model.mu_star() / (model.sigma0_star() * model.sigma0_star());
  const double half_mu = 0.5 * model.mu_star();
  Mat3 b{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) b[r][c] = gain * (i_sample * kSignalCoupling[r][c] + half_mu * kLevelCoupling[r][c]);
  }
  return b;
}

/// Largest log-ratio kept between the most and least likely state; smaller
/// weights are floored there (and counted).
inline constexpr double kLogOddsClamp = 500.0;

/// Point on the open 2-simplex stored as log-odds (log z1/z3, log z2/z3), so
/// that normalization is exact by construction.
class Posterior {
 public:
  Posterior() = default;

  static Posterior uniform() noexcept { return Posterior{}; }

  static Posterior from_log_odds(double l1, double l2) noexcept {
    Posterior p;
    p.log_odds_ = {l1, l2};
    return p;
  }

  static Posterior from_probabilities(const Vec3& z) {
    for (double v : z) {
      if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("Posterior: probabilities must be positive");
    }
    return from_log_odds(std::log(z[0] / z[2]), std::log(z[1] / z[2]));
  }

  const std::array<double, 2>& log_odds() const noexcept { return log_odds_; }

  Vec3 z() const noexcept {
    const double m = std::max({log_odds_[0], log_odds_[1], 0.0});
    const double w1 = std::exp(log_odds_[0] - m);
    const double w2 = std::exp(log_odds_[1] - m);
    const double w3 = std::exp(-m);
    const double s = w1 + w2 + w3;
    return {w1 / s, w2 / s, w3 / s};
  }

 private:
  std::array<double, 2> log_odds_{0.0, 0.0};
};

struct FilterStats {
  std::uint64_t saturations = 0;  // accepted steps on which the clamp engaged
};

namespace detail {

inline double clamp_log_odds(double v, FilterStats& stats) noexcept {
  if (v > kLogOddsClamp) {
    ++stats.saturations;
    return kLogOddsClamp;
  }
  if (v < -kLogOddsClamp) {
    ++stats.saturations;
    return -kLogOddsClamp;
  }
  return v;
}

// Floors every log-weight (l1, l2, 0) at max - kLogOddsClamp and re-expresses
// the result against state 3.  Unlike clamping each ratio separately, this
// keeps the order of the two leading states when both dwarf the third.
inline std::array<double, 2> clamp_log_weights(double l1, double l2, FilterStats& stats) noexcept {
  const double floor = std::max({l1, l2, 0.0}) - kLogOddsClamp;
  if (l1 >= floor && l2 >= floor && 0.0 >= floor) return {l1, l2};
  ++stats.saturations;
  const double w3 = std::max(0.0, floor);
  return {std::max(l1, floor) - w3, std::max(l2, floor) - w3};
}

// log(sum_b c_b * exp(x_b)) over entries with c_b > 0.
template <std::size_t N>
double log_weighted_sum(const std::array<double, N>& c, const std::array<double, N>& x) noexcept {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < N; ++b) {
    if (c[b] > 0.0) m = std::max(m, x[b]);
  }
  double s = 0.0;
  for (std::size_t b = 0; b < N; ++b) {
    if (c[b] > 0.0) s += c[b] * std::exp(x[b] - m);
  }
  return m + std::log(s);
}

}  // namespace detail

/// Integrates the filter in log-odds coordinates over a fixed step.
///
/// Per step, with the observation held constant:
///   l_a += dt * B_{a,3}(I) + (dt/2) * (h_a(l) + h_a(l~)),
/// where l~ is the explicit Euler predictor and dt*h_a is the change of
/// log(z_a/z_3) under the one-step linear prediction z -> (Id + dt R) z.
/// h = [Rz]_a/z_a - [Rz]_3/z_3 + O(dt), but stays bounded near the simplex
/// vertices where the exact rate term is stiff.
class FilterStepper {
 public:
  FilterStepper(const GateModel& model, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("FilterStepper: dt must be positive");
    const Mat3& r = model.generator();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) predict_[i][j] = (i == j ? 1.0 : 0.0) + dt * r[i][j];
      if (!(predict_[i][i] > 0.0)) {
        throw std::invalid_argument("FilterStepper: dt times the exit rate must stay below 1");
      }
    }
    const double gain = model.mu_star() / (model.sigma0_star() * model.sigma0_star());
    // dt * B_{a,3}(I) = slope_a * I + offset_a
    slope_ = {dt * gain * kSignalCoupling[0][2], dt * gain * kSignalCoupling[1][2]};
    offset_ = {dt * gain * 0.5 * model.mu_star() * kLevelCoupling[0][2],
               dt * gain * 0.5 * model.mu_star() * kLevelCoupling[1][2]};
  }

  double dt() const noexcept { return dt_; }

  Posterior step(const Posterior& state, double i_sample, FilterStats& stats) const noexcept {
    const auto& l = state.log_odds();
    const double e1 = slope_[0] * i_sample + offset_[0];
    const double e2 = slope_[1] * i_sample + offset_[1];
    const auto h0 = prediction_shift(l[0], l[1]);
    FilterStats predictor_clamps;  // not reported; only accepted states count
    const auto p = detail::clamp_log_weights(l[0] + e1 + h0[0], l[1] + e2 + h0[1], predictor_clamps);
    const auto h1 = prediction_shift(p[0], p[1]);
    const auto n = detail::clamp_log_weights(l[0] + e1 + 0.5 * (h0[0] + h1[0]), l[1] + e2 + 0.5 * (h0[1] + h1[1]), stats);
    return Posterior::from_log_odds(n[0], n[1]);
  }

 private:
  // dt * h(l) for both log-odds components.
  std::array<double, 2> prediction_shift(double l1, double l2) const noexcept {
    const std::array<double, 3> x{l1, l2, 0.0};
    double g[3];
    for (int a = 0; a < 3; ++a) {
      std::array<double, 3> rel{x[0] - x[a], x[1] - x[a], x[2] - x[a]};
      g[a] = detail::log_weighted_sum(predict_[a], rel);
    }
    return {g[0] - g[2], g[1] - g[2]};
  }

  double dt_;
  Mat3 predict_{};
  std::array<double, 2> slope_{};
  std::array<double, 2> offset_{};
};

inline Posterior filter_step(const Posterior& state, double i_sample, double dt, const GateModel& model,
                             FilterStats* stats = nullptr) {
  FilterStats local;
  const auto next = FilterStepper(model, dt).step(state, i_sample, local);
  if (stats) stats->saturations += local.saturations;
  return next;
}

/// Streams the filter over a signal; `on_step(k, posterior)` sees the
/// posterior after consuming sample k.
template <typename Visitor>
FilterStats run_filter(const SignalPath& signal, const GateModel& model, Posterior z0, Visitor&& on_step) {
  const FilterStepper stepper(model, signal.grid.dt());
  FilterStats stats;
  Posterior state = z0;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    state = stepper.step(state, signal[k], stats);
    on_step(k, state);
  }
  return stats;
}

struct PosteriorPath {
  SimGrid grid;
  std::vector<Vec3> z;
  FilterStats stats;
};

inline PosteriorPath run_filter(const SignalPath& signal, const GateModel& model,
                                Posterior z0 = Posterior::uniform()) {
  PosteriorPath path{signal.grid, {}, {}};
  path.z.reserve(signal.size());
  path.stats = run_filter(signal, model, z0, [&](std::size_t, const Posterior& p) { path.z.push_back(p.z()); });
  return path;
}

/// Exact discrete Bayes update in probability space: predict with
/// (Id + dt R), weight by Gaussian likelihoods of variance sigma0*^2/dt,
/// renormalize.  Deliberately shares no code with FilterStepper.
/// `degenerate` is set when the update has no mass left; the result is then
/// reset to uniform.
inline Vec3 discrete_oracle_step(const Vec3& z, double i_sample, double dt, const GateModel& model,
                                 bool* degenerate = nullptr) {
  const double ron = model.r_on_star();
  const double roff = model.r_off_star();
  const Vec3 pred{
      z[0] + dt * (-2.0 * ron * z[0] + roff * z[1]),
      z[1] + dt * (2.0 * ron * z[0] - (ron + roff) * z[1] + 2.0 * roff * z[2]),
      z[2] + dt * (ron * z[1] - 2.0 * roff * z[2]),
  };
  const double var = model.sigma0_star() * model.sigma0_star() / dt;
  Vec3 loglik{};
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < 3; ++s) {
    const double mean = (s - 1) * model.mu_star();
    loglik[s] = -(i_sample - mean) * (i_sample - mean) / (2.0 * var);
    if (pred[s] > 0.0) best = std::max(best, loglik[s]);
  }
  Vec3 post{};
  double total = 0.0;
  for (int s = 0; s < 3; ++s) {
    post[s] = pred[s] > 0.0 ? pred[s] * std::exp(loglik[s] - best) : 0.0;
    total += post[s];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    if (degenerate) *degenerate = true;
    return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  }
  if (degenerate) *degenerate = false;
  for (double& v : post) v /= total;
  return post;
}

/// Analog gate output: NOR -> z1, XOR -> z2, AND -> z3, OR -> 1-z1, NAND -> 1-z3.
constexpr double readout(const Vec3& z, GateKind kind) noexcept {
  switch (kind) {
    case GateKind::NOR: return z[0];
    case GateKind::XOR: return z[1];
    case GateKind::AND: return z[2];
    case GateKind::OR: return 1.0 - z[0];
    case GateKind::NAND: return 1.0 - z[2];
  }
  return 0.0;
}

struct AnalogPath {
  SimGrid grid;
  std::vector<double> samples;

  std::size_t size() const noexcept { return samples.size(); }
  double operator[](std::size_t k) const noexcept { return samples[k]; }
};

inline AnalogPath gate_readout(const PosteriorPath& path, GateKind kind) {
  AnalogPath out{path.grid, std::vector<double>(path.z.size())};
  for (std::size_t k = 0; k < path.z.size(); ++k) out.samples[k] = readout(path.z[k], kind);
  return out;
}

/// Assumed parameters of one transmitted input channel.
struct BinaryChannelModel {
  double mu_star = 1.0;
  double sigma_star = 0.75;
  double r_on_star = 1e-3;
  double r_off_star = 1e-3;
};

/// Two-state analog of FilterStepper for a single input observed at levels
/// +-mu*/2; the state is log(p/(1-p)) with p = P(x = 1).
class BinaryFilterStepper {
 public:
  BinaryFilterStepper(const BinaryChannelModel& model, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("BinaryFilterStepper: dt must be positive");
    if (!(model.sigma_star > 0.0)) throw std::invalid_argument("BinaryFilterStepper: sigma_star must be positive");
    if (!(model.r_on_star >= 0.0) || !(model.r_off_star >= 0.0)) {
      throw std::invalid_argument("BinaryFilterStepper: rates must be nonnegative");
    }
    // states (0, 1); generator [[-r_on, r_off], [r_on, -r_off]]
    predict_ = {{{1.0 - dt * model.r_on_star, dt * model.r_off_star},
                 {dt * model.r_on_star, 1.0 - dt * model.r_off_star}}};
    if (!(predict_[0][0] > 0.0) || !(predict_[1][1] > 0.0)) {
      throw std::invalid_argument("BinaryFilterStepper: dt times the exit rate must stay below 1");
    }
    slope_ = dt * model.mu_star / (model.sigma_star * model.sigma_star);
  }

  double step(double log_odds, double u_sample, FilterStats& stats) const noexcept {
    const double e = slope_ * u_sample;
    const double h0 = prediction_shift(log_odds);
    FilterStats predictor_clamps;
    const double pred = detail::clamp_log_odds(log_odds + e + h0, predictor_clamps);
    const double h1 = prediction_shift(pred);
    return detail::clamp_log_odds(log_odds + e + 0.5 * (h0 + h1), stats);
  }

 private:
  double prediction_shift(double l) const noexcept {
    const double g1 = detail::log_weighted_sum(predict_[1], std::array<double, 2>{-l, 0.0});
    const double g0 = detail::log_weighted_sum(predict_[0], std::array<double, 2>{0.0, l});
    return g1 - g0;
  }

  std::array<std::array<double, 2>, 2> predict_{};
  double slope_ = 0.0;
};

inline double logistic(double l) noexcept {
  return l >= 0.0 ? 1.0 / (1.0 + std::exp(-l)) : std::exp(l) / (1.0 + std::exp(l));
}

/// Streams p(x = 1) along a single-channel signal; starts from p = 1/2.
template <typename Visitor>
FilterStats binary_filter(const SignalPath& u, const BinaryChannelModel& model, Visitor&& on_step) {
  const BinaryFilterStepper stepper(model, u.grid.dt());
  FilterStats stats;
  double l = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    l = stepper.step(l, u[k], stats);
    on_step(k, l);
  }
  return stats;
}

inline AnalogPath binary_filter(const SignalPath& u, const BinaryChannelModel& model) {
  AnalogPath out{u.grid, std::vector<double>(u.size())};
  binary_filter(u, model, [&](std::size_t k, double l) { out.samples[k] = logistic(l); });
  return out;
}

}  // namespace bgate
