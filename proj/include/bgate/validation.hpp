// Invariant and oracle checks runnable on demand (the `validate` command).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "bgate/bayes_gate.hpp"
#include "bgate/channel.hpp"
#include "bgate/lsr_gate.hpp"
#include "bgate/simgrid.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

struct CheckResult {
  std::string name;
  bool passed = false;
  double tolerance = 0.0;
  std::map<std::string, double> measured;
};

/// Operating point of the reference sample paths: mu = 1, sigma0 = sigma0* =
/// 0.75, r_on = r_off = 1/1000.
struct ReferencePoint {
  double mu = 1.0;
  double sigma0 = 0.75;
  double rate = 1e-3;

  GateModel model() const { return GateModel(mu, sigma0, rate, rate); }
};

/// Max |sum z - 1| and min z over a full filter run on random inputs.
inline CheckResult check_simplex_conservation(const SimGrid& grid, std::uint64_t seed,
                                              const ReferencePoint& ref = {}) {
  const TelegraphParams rates{ref.rate, ref.rate};
  const auto chi = aggregate_chi(sample_telegraph(rates, grid, derive_seed({seed, 10, 0, 0, 0})),
                                 sample_telegraph(rates, grid, derive_seed({seed, 10, 0, 0, 1})));
  const auto signal = emit_combined(chi, ChannelParams{ref.mu, ref.sigma0, 0.0}, derive_seed({seed, 10, 0, 0, 2}));
  double worst = 0.0;
  double smallest = 1.0;
  const auto stats = run_filter(signal, ref.model(), Posterior::uniform(), [&](std::size_t, const Posterior& p) {
    const Vec3 z = p.z();
    worst = std::max(worst, std::abs(z[0] + z[1] + z[2] - 1.0));
    smallest = std::min({smallest, z[0], z[1], z[2]});
  });
  CheckResult r{"simplex_conservation", false, 4.0 * std::numeric_limits<double>::epsilon(), {}};
  r.measured = {{"max_abs_sum_minus_one", worst},
                {"min_component", smallest},
                {"steps", static_cast<double>(grid.n_steps())},
                {"saturations", static_cast<double>(stats.saturations)}};
  r.passed = worst <= r.tolerance && smallest > 0.0;
  return r;
}

/// z . (B(I) z) over random simplex points and random observations.
inline CheckResult check_drift_antisymmetry(int probes, std::uint64_t seed, const ReferencePoint& ref = {}) {
  RandomStream rng(derive_seed({seed, 11, 0, 0, 0}));
  const GateModel model = ref.model();
  double worst = 0.0;
  for (int n = 0; n < probes; ++n) {
    // uniform on the simplex via normalized exponentials
    Vec3 z{};
    double s = 0.0;
    for (double& v : z) s += (v = -std::log(1.0 - rng.uniform()));
    for (double& v : z) v /= s;
    const double i_sample = static_cast<double>(static_cast<int>(3.0 * rng.uniform()) - 1) * ref.mu +
                            ref.sigma0 / std::sqrt(0.1) * rng.normal();
    const Mat3 b = drift_b(i_sample, model);
    double quad = 0.0;
    for (int r = 0; r < 3; ++r) {
      double row = 0.0;
      for (int c = 0; c < 3; ++c) row += b[r][c] * z[c];
      quad += z[r] * row;
    }
    worst = std::max(worst, std::abs(quad));
  }
  CheckResult r{"drift_antisymmetry", false, 1e-12, {}};
  r.measured = {{"max_abs_zBz", worst}, {"probes", static_cast<double>(probes)}};
  r.passed = worst <= r.tolerance;
  return r;
}

/// Sup-norm gap between the log-odds filter and the discrete Bayes recursion
/// on one Brownian path observed at step dt.  The path is defined on a fine
/// grid of `fine_steps` increments over [0, horizon] and aggregated to dt.
inline double oracle_gap(double dt, double horizon, const std::vector<double>& fine_normals,
                         const ReferencePoint& ref = {}) {
  const double fine_dt = horizon / static_cast<double>(fine_normals.size());
  const auto block = static_cast<std::size_t>(std::llround(dt / fine_dt));
  const std::size_t steps = fine_normals.size() / block;
  const GateModel model = ref.model();
  const FilterStepper stepper(model, dt);
  FilterStats stats;
  Posterior filt = Posterior::uniform();
  Vec3 oracle{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double gap = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    double w = 0.0;
    for (std::size_t j = 0; j < block; ++j) w += fine_normals[k * block + j];
    w /= std::sqrt(static_cast<double>(block));
    // chi_2 for the first half, chi_3 afterwards
    const std::uint8_t chi = (k + 1) * 2 <= steps ? 2 : 3;
    const double i_sample = nu(chi, ref.mu) + ref.sigma0 * w / std::sqrt(dt);
    filt = stepper.step(filt, i_sample, stats);
    oracle = discrete_oracle_step(oracle, i_sample, dt, model);
    const Vec3 z = filt.z();
    for (int s = 0; s < 3; ++s) gap = std::max(gap, std::abs(z[s] - oracle[s]));
  }
  return gap;
}

/// Least-squares slope of log(gap) against log(dt).
inline double convergence_order(const std::vector<double>& dts, const std::vector<double>& gaps) {
  const double n = static_cast<double>(dts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]);
    const double y = std::log(gaps[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Oracle equivalence at dt in {1e-2, 1e-3, 1e-4} on a window of 1000
/// coarse steps.
inline CheckResult check_oracle_convergence(std::uint64_t seed, const ReferencePoint& ref = {}) {
  const std::vector<double> dts{1e-2, 1e-3, 1e-4};
  const double horizon = 1000.0 * dts.front();
  const auto fine_steps = static_cast<std::size_t>(std::llround(horizon / dts.back()));
  RandomStream rng(derive_seed({seed, 12, 0, 0, 0}));
  std::vector<double> normals(fine_steps);
  for (double& v : normals) v = rng.normal();
  std::vector<double> gaps;
  for (double dt : dts) gaps.push_back(oracle_gap(dt, horizon, normals, ref));
  CheckResult r{"oracle_convergence", false, 0.3, {}};
  const double order = convergence_order(dts, gaps);
  r.measured = {{"gap_dt_1e-2", gaps[0]}, {"gap_dt_1e-3", gaps[1]}, {"gap_dt_1e-4", gaps[2]}, {"order", order}};
  r.passed = std::abs(order - 1.0) <= r.tolerance;
  return r;
}

/// With mu* = 0 the filter must relax to the stationary law of chi.
inline CheckResult check_generator_stationarity(int starts, std::uint64_t seed, double horizon = 2e4,
                                                double dt = 0.1, double rate = 1e-3) {
  const GateModel model(0.0, 1.0, rate, rate);
  const FilterStepper stepper(model, dt);
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  RandomStream rng(derive_seed({seed, 13, 0, 0, 0}));
  const Vec3 target{0.25, 0.5, 0.25};
  double worst = 0.0;
  for (int n = 0; n < starts; ++n) {
    Vec3 z{};
    double s = 0.0;
    for (double& v : z) s += (v = 1e-3 + rng.uniform());
    for (double& v : z) v /= s;
    Posterior p = Posterior::from_probabilities(z);
    FilterStats stats;
    for (std::size_t k = 0; k < steps; ++k) p = stepper.step(p, 0.0, stats);
    const Vec3 end = p.z();
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(end[i] - target[i]));
  }
  CheckResult r{"generator_stationarity", false, 1e-6, {}};
  r.measured = {{"max_abs_deviation", worst}, {"starts", static_cast<double>(starts)}};
  r.passed = worst <= r.tolerance;
  return r;
}

/// Fixed points of the LSR system with I = 0.
inline CheckResult check_lsr_fixed_points(const LsrParams& params = {}) {
  const SimGrid grid(0.1, 200.0);
  const SignalPath zero{grid, std::vector<double>(grid.n_steps(), 0.0)};
  const double upper = run_lsr(zero, params, 2.0).samples.back();
  const double lower = run_lsr(zero, params, -2.0).samples.back();
  const double middle = run_lsr(zero, params, 0.0).samples.back();
  const double upper_expected = params.beta * params.y_hi / params.alpha;
  const double lower_expected = params.beta * params.y_lo / params.alpha;
  CheckResult r{"lsr_fixed_points", false, 1e-6, {}};
  r.measured = {{"upper", upper}, {"lower", lower}, {"middle", middle}};
  r.passed = std::abs(upper - upper_expected) <= r.tolerance && std::abs(lower - lower_expected) <= r.tolerance &&
             middle == 0.0;
  return r;
}

/// Constant evidence for chi_3 with frozen inputs: z3 never decreases.
inline CheckResult check_evidence_monotonicity(const ReferencePoint& ref = {}) {
  const GateModel model(ref.mu, ref.sigma0, 0.0, 0.0);
  const FilterStepper stepper(model, 0.1);
  Posterior p = Posterior::uniform();
  FilterStats stats;
  double prev = p.z()[2];
  double worst_drop = 0.0;
  for (int k = 0; k < 2000; ++k) {
    p = stepper.step(p, nu(3, ref.mu), stats);
    const double z3 = p.z()[2];
    worst_drop = std::max(worst_drop, prev - z3);
    prev = z3;
  }
  CheckResult r{"evidence_monotonicity", false, 0.0, {}};
  r.measured = {{"max_decrease", worst_drop}, {"final_z3", prev}};
  r.passed = worst_drop <= r.tolerance;
  return r;
}

}  // namespace bgate
