// Experiment grids: error rate versus input noise, error surfaces over
// (sigma0, sigma0*), and the performance ratio over (sigma, q).
//
// Every (cell, replicate) task is a pure function of the spec and its
// coordinates.  Tasks run on a small thread pool and write into fixed slots,
// so the aggregated table does not depend on thread count or completion
// order.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bgate/bayes_gate.hpp"
#include "bgate/channel.hpp"
#include "bgate/conventional.hpp"
#include "bgate/lsr_gate.hpp"
#include "bgate/metrics.hpp"
#include "bgate/simgrid.hpp"
#include "bgate/telegraph.hpp"

namespace bgate {

enum class ExperimentKind { SigmaSweep = 1, MismatchGrid = 2, QGrid = 3 };

constexpr std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::SigmaSweep: return "sigma-sweep";
    case ExperimentKind::MismatchGrid: return "mismatch-grid";
    case ExperimentKind::QGrid: return "q-grid";
  }
  return "?";
}

inline std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept {
  for (auto k : {ExperimentKind::SigmaSweep, ExperimentKind::MismatchGrid, ExperimentKind::QGrid}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

struct Axis {
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log_scale = false;

  void validate(const char* name) const {
    const std::string n(name);
    if (count < 2) throw std::invalid_argument("axis " + n + ": count must be >= 2");
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
      throw std::invalid_argument("axis " + n + ": need finite min < max");
    }
    if (log_scale && !(min > 0.0)) throw std::invalid_argument("axis " + n + ": log axis needs min > 0");
  }

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(count - 1);
      v[static_cast<std::size_t>(i)] =
          log_scale ? min * std::pow(max / min, f) : (i == count - 1 ? max : min + f * (max - min));
    }
    return v;
  }
};

struct SweepSpec {
  ExperimentKind kind = ExperimentKind::SigmaSweep;
  // sigma-sweep: sigma0 (= sigma, q = 0); mismatch-grid: sigma0; q-grid: sigma
  Axis axis1{0.3, 1.2, 10, false};
  // mismatch-grid: sigma0*; q-grid: q; unused by sigma-sweep
  Axis axis2{0.0, 1.0, 5, false};
  double mu = 1.0;
  TelegraphParams rates{};
  std::vector<GateKind> gates{GateKind::NOR};
  LsrParams lsr{};
  // sigma-sweep only: extra Bayesian curves at these fixed sigma0*
  std::vector<double> mismatched_sigma0_star{};
  int replicates = 8;
  SimGrid grid{0.1, 2e5};
  std::uint64_t base_seed = 1;
  // share input paths and noise draws across cells (and between the two
  // sides of eta)
  bool common_random_numbers = true;
  ChannelDecoder decoder = ChannelDecoder::Bayesian;
  std::optional<double> burn_in{};  // defaults to default_burn_in(rates)

  void validate() const {
    axis1.validate("1");
    if (kind != ExperimentKind::SigmaSweep) axis2.validate("2");
    if (kind == ExperimentKind::QGrid && (axis2.min < 0.0 || axis2.max > 1.0)) {
      throw std::invalid_argument("q axis must lie within [0, 1]");
    }
    if (!(axis1.min > 0.0)) throw std::invalid_argument("noise axis must be positive");
    if (kind == ExperimentKind::MismatchGrid && !(axis2.min > 0.0)) {
      throw std::invalid_argument("sigma0* axis must be positive");
    }
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (gates.empty()) throw std::invalid_argument("at least one gate kind is required");
    if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
    rates.validate();
    lsr.validate();
    for (double s : mismatched_sigma0_star) {
      if (!(s > 0.0)) throw std::invalid_argument("mismatched sigma0* values must be positive");
    }
    if (burn_in && !(*burn_in >= 0.0)) throw std::invalid_argument("burn_in must be nonnegative");
    if (burn_steps() >= grid.n_steps()) throw std::invalid_argument("burn-in covers the whole horizon");
  }

  std::size_t burn_steps() const { return grid.index_after(burn_in.value_or(default_burn_in(rates))); }
};

struct Stat {
  double mean = 0.0;
  std::optional<double> se;  // present with >= 2 replicates
};

struct ReportRow {
  std::vector<double> coords;
  std::vector<Stat> values;
  std::string error;  // non-empty when the cell failed
};

struct ReportTable {
  ExperimentKind kind = ExperimentKind::SigmaSweep;
  std::vector<std::string> coord_names;
  std::vector<std::string> value_names;
  std::vector<ReportRow> rows;
  int replicates = 0;

  std::size_t value_index(std::string_view name) const {
    const auto it = std::find(value_names.begin(), value_names.end(), name);
    if (it == value_names.end()) throw std::out_of_range("ReportTable: no column " + std::string(name));
    return static_cast<std::size_t>(it - value_names.begin());
  }

  const Stat& at(std::size_t row, std::string_view name) const { return rows.at(row).values.at(value_index(name)); }
};

struct RunOptions {
  unsigned threads = 1;
  // Permutation of task indices, for order-independence checks; empty means
  // natural order.
  std::vector<std::size_t> order{};
  std::function<void(std::size_t done, std::size_t total)> progress{};
};

namespace detail {

enum Stream : std::uint64_t { kInput1 = 0, kInput2 = 1, kNoise1 = 2, kNoise2 = 3, kNoiseCombined = 4 };

struct Draws {
  const SweepSpec& spec;
  std::size_t cell;
  std::size_t replicate;

  // Cell coordinate 0 is reserved for draws shared across cells.
  std::uint64_t seed(std::uint64_t stream) const {
    return derive_seed({spec.base_seed, static_cast<std::uint64_t>(spec.kind),
                        spec.common_random_numbers ? 0 : cell + 1, static_cast<std::uint64_t>(replicate), stream});
  }

  BooleanPath input(std::uint64_t stream) const { return sample_telegraph(spec.rates, spec.grid, seed(stream)); }
};

inline Stat summarize(const std::vector<double>& xs) {
  Stat s;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / n;
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

// Ratio of means with a delta-method standard error over paired replicates.
inline Stat ratio_of_means(const std::vector<double>& num, const std::vector<double>& den) {
  const Stat a = summarize(num);
  const Stat b = summarize(den);
  Stat r;
  if (!(b.mean > 0.0)) {
    r.mean = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.mean = a.mean / b.mean;
  if (num.size() >= 2) {
    std::vector<double> resid(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) resid[i] = num[i] - r.mean * den[i];
    r.se = summarize(resid).se.value() / b.mean;
  }
  return r;
}

// Runs fn(task) for every task index, on `threads` workers.  Exceptions are
// captured per task and returned.
inline std::vector<std::string> run_tasks(std::size_t n_tasks, const RunOptions& options,
                                          const std::function<void(std::size_t)>& fn) {
  std::vector<std::size_t> order = options.order;
  if (order.empty()) {
    order.resize(n_tasks);
    for (std::size_t i = 0; i < n_tasks; ++i) order[i] = i;
  }
  if (order.size() != n_tasks) throw std::invalid_argument("RunOptions.order must be a permutation of all tasks");
  std::vector<std::string> errors(n_tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_tasks; i = next++) {
      const std::size_t task = order[i];
      try {
        fn(task);
      } catch (const std::exception& e) {
        errors[task] = e.what();
      }
      const std::size_t d = ++done;
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(d, n_tasks);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_tasks)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return errors;
}

inline std::string gate_column(GateKind g, std::string_view suffix) {
  return std::string(to_string(g)) + "_" + std::string(suffix);
}

inline std::string number_tag(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// Collects per-(cell, replicate) value vectors and reduces them to rows.
struct Collector {
  std::size_t n_cells;
  std::size_t n_values;
  int replicates;
  std::vector<std::vector<double>> slots;  // [cell * replicates + rep] -> values

  Collector(std::size_t cells, std::size_t values, int reps)
      : n_cells(cells), n_values(values), replicates(reps),
        slots(cells * static_cast<std::size_t>(reps), std::vector<double>(values, 0.0)) {}

  std::vector<double>& slot(std::size_t cell, std::size_t rep) {
    return slots[cell * static_cast<std::size_t>(replicates) + rep];
  }

  std::vector<double> series(std::size_t cell, std::size_t value) {
    std::vector<double> xs(static_cast<std::size_t>(replicates));
    for (std::size_t r = 0; r < xs.size(); ++r) xs[r] = slot(cell, r)[value];
    return xs;
  }
};

inline void attach_errors(ReportTable& table, const std::vector<std::string>& task_errors,
                          const std::function<std::size_t(std::size_t)>& task_cell) {
  for (std::size_t t = 0; t < task_errors.size(); ++t) {
    if (task_errors[t].empty()) continue;
    auto& row = table.rows.at(task_cell(t));
    if (row.error.empty()) row.error = task_errors[t];
  }
}

}  // namespace detail

/// Bayesian gate at sigma0* = sigma0 (plus any fixed mismatched sigma0*)
/// and the LSR gate, per input noise level.
inline ReportTable run_sigma_sweep(const SweepSpec& spec, const RunOptions& options = {}) {
  spec.validate();
  if (spec.kind != ExperimentKind::SigmaSweep) throw std::invalid_argument("run_sigma_sweep: wrong experiment kind");
  const auto sigmas = spec.axis1.values();
  const std::size_t burn = spec.burn_steps();

  ReportTable table;
  table.kind = spec.kind;
  table.replicates = spec.replicates;
  table.coord_names = {"sigma0"};
  std::vector<GateKind> lsr_gates;
  for (GateKind g : spec.gates) table.value_names.push_back(detail::gate_column(g, "bg_er"));
  for (double s : spec.mismatched_sigma0_star) {
    for (GateKind g : spec.gates) {
      table.value_names.push_back(detail::gate_column(g, "bg_er_s0star_" + detail::number_tag(s)));
    }
  }
  for (GateKind g : spec.gates) {
    if (g == spec.lsr.native || complement(spec.lsr.native) == g) {
      lsr_gates.push_back(g);
      table.value_names.push_back(detail::gate_column(g, "lsr_er"));
    }
  }

  const std::size_t n_cells = sigmas.size();
  const auto reps = static_cast<std::size_t>(spec.replicates);
  detail::Collector out(n_cells, table.value_names.size(), spec.replicates);

  const auto errors = detail::run_tasks(n_cells * reps, options, [&](std::size_t task) {
    const std::size_t cell = task / reps;
    const std::size_t rep = task % reps;
    const detail::Draws draws{spec, cell, rep};
    const ChiPath chi = aggregate_chi(draws.input(detail::kInput1), draws.input(detail::kInput2));
    const ChannelParams channel{spec.mu, sigmas[cell], 0.0};
    const SignalPath signal = emit_combined(chi, channel, draws.seed(detail::kNoiseCombined));

    auto& values = out.slot(cell, rep);
    std::size_t col = 0;
    const auto optimal = bayes_gate_error_rates(
        signal, chi, GateModel(spec.mu, channel.sigma0(), spec.rates.r_on, spec.rates.r_off), spec.gates, burn);
    for (double v : optimal) values[col++] = v;
    for (double s : spec.mismatched_sigma0_star) {
      const auto er = bayes_gate_error_rates(signal, chi, GateModel(spec.mu, s, spec.rates.r_on, spec.rates.r_off),
                                             spec.gates, burn);
      for (double v : er) values[col++] = v;
    }
    if (!lsr_gates.empty()) {
      std::vector<ErrorCounter> counters(lsr_gates.size(), ErrorCounter(burn));
      run_lsr(signal, spec.lsr, 0.0, [&](std::size_t k, double y) {
        for (std::size_t g = 0; g < lsr_gates.size(); ++g) {
          counters[g].add(k, lsr_readout(y, lsr_gates[g], spec.lsr) > kLsrThreshold,
                          ideal_gate_chi(chi[k], lsr_gates[g]) != 0);
        }
      });
      for (const auto& c : counters) values[col++] = c.rate();
    }
  });

  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    ReportRow row{{sigmas[cell]}, {}, {}};
    for (std::size_t v = 0; v < table.value_names.size(); ++v) row.values.push_back(detail::summarize(out.series(cell, v)));
    table.rows.push_back(std::move(row));
  }
  detail::attach_errors(table, errors, [&](std::size_t t) { return t / reps; });
  return table;
}

/// Total, delay and excess error of each gate over (sigma0, sigma0*).
inline ReportTable run_mismatch_grid(const SweepSpec& spec, const RunOptions& options = {}) {
  spec.validate();
  if (spec.kind != ExperimentKind::MismatchGrid) throw std::invalid_argument("run_mismatch_grid: wrong experiment kind");
  const auto sigma0s = spec.axis1.values();
  const auto stars = spec.axis2.values();
  const std::size_t burn = spec.burn_steps();
  const std::size_t n_gates = spec.gates.size();

  ReportTable table;
  table.kind = spec.kind;
  table.replicates = spec.replicates;
  table.coord_names = {"sigma0", "sigma0_star"};
  for (GateKind g : spec.gates) {
    for (const char* suffix : {"er", "ed", "ee"}) table.value_names.push_back(detail::gate_column(g, suffix));
  }

  const std::size_t n_cells = sigma0s.size() * stars.size();
  const auto reps = static_cast<std::size_t>(spec.replicates);
  detail::Collector out(n_cells, table.value_names.size(), spec.replicates);
  // With shared draws the delay error depends only on (sigma0*, replicate).
  const bool shared = spec.common_random_numbers;
  const std::size_t n_delay_cells = shared ? stars.size() : 0;
  detail::Collector delay(std::max<std::size_t>(n_delay_cells, 1), n_gates, spec.replicates);
  const std::size_t n_cell_tasks = n_cells * reps;
  const std::size_t n_tasks = n_cell_tasks + n_delay_cells * reps;

  const auto model_for = [&](double star) { return GateModel(spec.mu, star, spec.rates.r_on, spec.rates.r_off); };

  const auto errors = detail::run_tasks(n_tasks, options, [&](std::size_t task) {
    if (task >= n_cell_tasks) {
      const std::size_t col = (task - n_cell_tasks) / reps;
      const std::size_t rep = (task - n_cell_tasks) % reps;
      const detail::Draws draws{spec, 0, rep};
      const ChiPath chi = aggregate_chi(draws.input(detail::kInput1), draws.input(detail::kInput2));
      delay.slot(col, rep) = delay_error_rates(model_for(stars[col]), spec.gates, chi, spec.mu, burn);
      return;
    }
    const std::size_t cell = task / reps;
    const std::size_t rep = task % reps;
    const std::size_t i = cell / stars.size();
    const std::size_t j = cell % stars.size();
    const detail::Draws draws{spec, cell, rep};
    const ChiPath chi = aggregate_chi(draws.input(detail::kInput1), draws.input(detail::kInput2));
    const SignalPath signal =
        emit_combined(chi, ChannelParams{spec.mu, sigma0s[i], 0.0}, draws.seed(detail::kNoiseCombined));
    const auto model = model_for(stars[j]);
    const auto total = bayes_gate_error_rates(signal, chi, model, spec.gates, burn);
    auto& values = out.slot(cell, rep);
    for (std::size_t g = 0; g < n_gates; ++g) values[3 * g] = total[g];
    if (!shared) {
      const auto d = delay_error_rates(model, spec.gates, chi, spec.mu, burn);
      for (std::size_t g = 0; g < n_gates; ++g) values[3 * g + 1] = d[g];
    }
  });

  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const std::size_t i = cell / stars.size();
    const std::size_t j = cell % stars.size();
    if (shared) {
      for (std::size_t rep = 0; rep < reps; ++rep) {
        for (std::size_t g = 0; g < n_gates; ++g) out.slot(cell, rep)[3 * g + 1] = delay.slot(j, rep)[g];
      }
    }
    for (std::size_t rep = 0; rep < reps; ++rep) {
      auto& v = out.slot(cell, rep);
      for (std::size_t g = 0; g < n_gates; ++g) v[3 * g + 2] = v[3 * g] - v[3 * g + 1];
    }
    ReportRow row{{sigma0s[i], stars[j]}, {}, {}};
    for (std::size_t v = 0; v < table.value_names.size(); ++v) row.values.push_back(detail::summarize(out.series(cell, v)));
    table.rows.push_back(std::move(row));
  }
  detail::attach_errors(table, errors, [&](std::size_t t) {
    if (t < n_cell_tasks) return t / reps;
    // a failed delay task poisons its whole sigma0* column; report on the
    // first cell of that column
    return (t - n_cell_tasks) / reps;
  });
  return table;
}

/// Bayesian gate on the combined channel (sigma0 = sigma*sqrt(1+q), optimal
/// sigma0*) against the conventional scheme on two sigma-channels.
inline ReportTable run_q_grid(const SweepSpec& spec, const RunOptions& options = {}) {
  spec.validate();
  if (spec.kind != ExperimentKind::QGrid) throw std::invalid_argument("run_q_grid: wrong experiment kind");
  const auto sigmas = spec.axis1.values();
  const auto qs = spec.axis2.values();
  const std::size_t burn = spec.burn_steps();
  const std::size_t n_gates = spec.gates.size();

  ReportTable table;
  table.kind = spec.kind;
  table.replicates = spec.replicates;
  table.coord_names = {"sigma", "q", "sigma0"};
  for (GateKind g : spec.gates) {
    for (const char* suffix : {"er_q", "er_u", "eta"}) table.value_names.push_back(detail::gate_column(g, suffix));
  }

  const std::size_t n_cells = sigmas.size() * qs.size();
  const auto reps = static_cast<std::size_t>(spec.replicates);
  detail::Collector out(n_cells, table.value_names.size(), spec.replicates);

  const auto errors = detail::run_tasks(n_cells * reps, options, [&](std::size_t task) {
    const std::size_t cell = task / reps;
    const std::size_t rep = task % reps;
    const double sigma = sigmas[cell / qs.size()];
    const double q = qs[cell % qs.size()];
    const detail::Draws draws{spec, cell, rep};
    const BooleanPath x1 = draws.input(detail::kInput1);
    const BooleanPath x2 = draws.input(detail::kInput2);
    const ChiPath chi = aggregate_chi(x1, x2);
    const ChannelParams channel{spec.mu, sigma, q};
    const auto xi1 = gaussian_increments(spec.grid, draws.seed(detail::kNoise1));
    const auto xi2 = gaussian_increments(spec.grid, draws.seed(detail::kNoise2));
    std::vector<double> xi0;
    if (spec.common_random_numbers) {
      // at q = 1 this makes I = U1 + U2 pathwise
      xi0.resize(xi1.size());
      for (std::size_t k = 0; k < xi0.size(); ++k) xi0[k] = (xi1[k] + xi2[k]) / std::sqrt(2.0);
    } else {
      xi0 = gaussian_increments(spec.grid, draws.seed(detail::kNoiseCombined));
    }
    const SignalPath combined = emit_combined(chi, channel, xi0);
    const auto er_q = bayes_gate_error_rates(
        combined, chi, GateModel(spec.mu, channel.sigma0(), spec.rates.r_on, spec.rates.r_off), spec.gates, burn);

    const ChannelParams single{spec.mu, sigma, 0.0};
    const SignalPath u1 = emit_physical(x1, single, xi1);
    const SignalPath u2 = emit_physical(x2, single, xi2);
    const BinaryChannelModel decoder{spec.mu, sigma, spec.rates.r_on, spec.rates.r_off};
    auto& values = out.slot(cell, rep);
    for (std::size_t g = 0; g < n_gates; ++g) {
      ErrorCounter counter(burn);
      run_conventional(u1, u2, decoder, spec.gates[g], spec.decoder, [&](std::size_t k, std::uint8_t bit) {
        counter.add(k, bit != 0, ideal_gate(x1[k], x2[k], spec.gates[g]) != 0);
      });
      values[3 * g] = er_q[g];
      values[3 * g + 1] = counter.rate();
    }
  });

  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const double sigma = sigmas[cell / qs.size()];
    const double q = qs[cell % qs.size()];
    ReportRow row{{sigma, q, sigma * std::sqrt(1.0 + q)}, {}, {}};
    for (std::size_t g = 0; g < n_gates; ++g) {
      const auto num = out.series(cell, 3 * g);
      const auto den = out.series(cell, 3 * g + 1);
      row.values.push_back(detail::summarize(num));
      row.values.push_back(detail::summarize(den));
      const Stat eta = detail::ratio_of_means(num, den);
      if (std::isnan(eta.mean) && row.error.empty()) row.error = "eta undefined: conventional error rate is zero";
      row.values.push_back(eta);
    }
    table.rows.push_back(std::move(row));
  }
  detail::attach_errors(table, errors, [&](std::size_t t) { return t / reps; });
  return table;
}

inline ReportTable run_sweep(const SweepSpec& spec, const RunOptions& options = {}) {
  switch (spec.kind) {
    case ExperimentKind::SigmaSweep: return run_sigma_sweep(spec, options);
    case ExperimentKind::MismatchGrid: return run_mismatch_grid(spec, options);
    case ExperimentKind::QGrid: return run_q_grid(spec, options);
  }
  throw std::invalid_argument("run_sweep: unknown experiment kind");
}

}  // namespace bgate
