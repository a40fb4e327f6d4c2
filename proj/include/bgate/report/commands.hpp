// The three CLI commands.  Each takes a fully merged Config (file plus flag
// overrides) and writes its outputs under run.out.
//
// Provenance deliberately leaves out run.threads and run.out: outputs are a
// function of the parameters and seed only.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bgate/bayes_gate.hpp"
#include "bgate/channel.hpp"
#include "bgate/lsr_gate.hpp"
#include "bgate/report/config.hpp"
#include "bgate/report/csv.hpp"
#include "bgate/report/svg.hpp"
#include "bgate/simgrid.hpp"
#include "bgate/sweep.hpp"
#include "bgate/telegraph.hpp"
#include "bgate/validation.hpp"

namespace bgate::report {

enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitBadConfig = 2, kExitIoError = 3 };

// ---------------------------------------------------------------- settings

namespace detail {

inline double positive(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.get_double(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw cfg.field_error(key, "must be positive and finite, got " + format_number(v));
  return v;
}

inline double nonnegative(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.get_double(key, fallback);
  if (!(v >= 0.0) || !std::isfinite(v)) throw cfg.field_error(key, "must be nonnegative and finite, got " + format_number(v));
  return v;
}

inline double finite(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.get_double(key, fallback);
  if (!std::isfinite(v)) throw cfg.field_error(key, "must be finite");
  return v;
}

inline GateKind gate_kind(const Config& cfg, const std::string& key, const std::string& name) {
  const auto g = parse_gate_kind(name);
  if (!g) throw cfg.field_error(key, "unknown gate '" + name + "' (expected nor, xor, and, or, nand)");
  return *g;
}

}  // namespace detail

inline SimGrid grid_settings(const Config& cfg, double default_t_end) {
  const double dt = detail::positive(cfg, "grid.dt", 0.1);
  const double t_end = detail::positive(cfg, "grid.t_end", default_t_end);
  try {
    return SimGrid(dt, t_end);
  } catch (const std::invalid_argument& e) {
    throw cfg.field_error("grid.t_end", e.what());
  }
}

inline TelegraphParams rate_settings(const Config& cfg) {
  TelegraphParams p{detail::nonnegative(cfg, "input.r_on", 1e-3), detail::nonnegative(cfg, "input.r_off", 1e-3)};
  if (p.r_on == 0.0 && p.r_off == 0.0) throw cfg.field_error("input.r_on", "r_on and r_off must not both be zero");
  return p;
}

inline std::vector<GateKind> gate_settings(const Config& cfg) {
  std::vector<GateKind> gates;
  for (const auto& name : cfg.get_list("gate.gates", {"nor"})) {
    const GateKind g = detail::gate_kind(cfg, "gate.gates", name);
    if (std::find(gates.begin(), gates.end(), g) == gates.end()) gates.push_back(g);
  }
  if (gates.empty()) throw cfg.field_error("gate.gates", "at least one gate is required");
  return gates;
}

inline LsrParams lsr_settings(const Config& cfg) {
  LsrParams p;
  p.alpha = detail::positive(cfg, "lsr.alpha", p.alpha);
  p.beta = detail::finite(cfg, "lsr.beta", p.beta);
  p.y_lo = detail::finite(cfg, "lsr.y_lo", p.y_lo);
  p.y_hi = detail::finite(cfg, "lsr.y_hi", p.y_hi);
  p.native = detail::gate_kind(cfg, "lsr.native", cfg.get_string("lsr.native", "or"));
  if (!(p.y_lo < p.y_hi)) throw cfg.field_error("lsr.y_hi", "must exceed lsr.y_lo");
  if (!(p.beta > p.alpha)) throw cfg.field_error("lsr.beta", "must exceed lsr.alpha");
  if (!complement(p.native)) throw cfg.field_error("lsr.native", "gate has no complement");
  return p;
}

inline ChannelParams channel_settings(const Config& cfg) {
  ChannelParams p;
  p.mu = detail::finite(cfg, "input.mu", p.mu);
  p.sigma = detail::positive(cfg, "input.sigma", p.sigma);
  p.q = detail::nonnegative(cfg, "input.q", p.q);
  if (p.q > 1.0) throw cfg.field_error("input.q", "must lie within [0, 1]");
  return p;
}

inline std::uint64_t seed_setting(const Config& cfg) { return cfg.get_uint("run.seed", 1); }

inline unsigned thread_setting(const Config& cfg) {
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const auto n = cfg.get_uint("run.threads", hw);
  if (n < 1 || n > 1024) throw cfg.field_error("run.threads", "must be between 1 and 1024");
  return static_cast<unsigned>(n);
}

inline std::filesystem::path out_setting(const Config& cfg) { return cfg.get_string("run.out", "."); }

inline Axis axis_setting(const Config& cfg, const std::string& key, const Axis& fallback) {
  if (!cfg.has(key)) return fallback;
  const auto items = cfg.get_list(key, {});
  if (items.size() != 3 && items.size() != 4) throw cfg.field_error(key, "expected 'min, max, count[, log]'");
  Axis a;
  const auto lo = parse_number(items[0]);
  const auto hi = parse_number(items[1]);
  const auto n = parse_number(items[2]);
  if (!lo || !hi || !n || *n != std::floor(*n)) throw cfg.field_error(key, "expected 'min, max, count[, log]'");
  a.min = *lo;
  a.max = *hi;
  a.count = static_cast<int>(*n);
  if (items.size() == 4) {
    if (items[3] != "log" && items[3] != "linear") throw cfg.field_error(key, "scale must be 'log' or 'linear'");
    a.log_scale = items[3] == "log";
  }
  try {
    a.validate(key.c_str());
  } catch (const std::invalid_argument& e) {
    throw cfg.field_error(key, e.what());
  }
  return a;
}

inline SweepSpec sweep_settings(const Config& cfg) {
  SweepSpec spec;
  const std::string exp = cfg.get_string("sweep.experiment", "sigma-sweep");
  const auto kind = parse_experiment_kind(exp);
  if (!kind) throw cfg.field_error("sweep.experiment", "expected sigma-sweep, mismatch-grid or q-grid, got '" + exp + "'");
  spec.kind = *kind;
  switch (spec.kind) {
    case ExperimentKind::SigmaSweep:
      spec.axis1 = axis_setting(cfg, "sweep.axis1", {0.3, 1.2, 10, false});
      break;
    case ExperimentKind::MismatchGrid:
      spec.axis1 = axis_setting(cfg, "sweep.axis1", {0.2, 1.2, 8, false});
      spec.axis2 = axis_setting(cfg, "sweep.axis2", {0.2, 1.2, 8, false});
      if (!(spec.axis2.min > 0.0)) throw cfg.field_error("sweep.axis2", "sigma0* values must be positive");
      break;
    case ExperimentKind::QGrid:
      spec.axis1 = axis_setting(cfg, "sweep.axis1", {0.3, 1.2, 4, false});
      spec.axis2 = axis_setting(cfg, "sweep.axis2", {0.0, 1.0, 5, false});
      if (spec.axis2.min < 0.0 || spec.axis2.max > 1.0) throw cfg.field_error("sweep.axis2", "q must lie within [0, 1]");
      break;
  }
  if (!(spec.axis1.min > 0.0)) throw cfg.field_error("sweep.axis1", "noise values must be positive");
  spec.mu = detail::finite(cfg, "input.mu", 1.0);
  spec.rates = rate_settings(cfg);
  spec.gates = gate_settings(cfg);
  spec.lsr = lsr_settings(cfg);
  spec.mismatched_sigma0_star = cfg.get_number_list("sweep.mismatched_sigma0_star");
  for (double s : spec.mismatched_sigma0_star) {
    if (!(s > 0.0)) throw cfg.field_error("sweep.mismatched_sigma0_star", "values must be positive");
  }
  const auto reps = cfg.get_int("sweep.replicates", 8);
  if (reps < 1 || reps > 100000) throw cfg.field_error("sweep.replicates", "must be between 1 and 100000");
  spec.replicates = static_cast<int>(reps);
  spec.grid = grid_settings(cfg, 2e5);
  spec.base_seed = seed_setting(cfg);
  spec.common_random_numbers = cfg.get_bool("sweep.common_random_numbers", true);
  const std::string dec = cfg.get_string("sweep.decoder", "bayesian");
  if (dec == "bayesian") {
    spec.decoder = ChannelDecoder::Bayesian;
  } else if (dec == "threshold") {
    spec.decoder = ChannelDecoder::Threshold;
  } else {
    throw cfg.field_error("sweep.decoder", "expected bayesian or threshold, got '" + dec + "'");
  }
  if (cfg.has("sweep.burn_in")) spec.burn_in = detail::nonnegative(cfg, "sweep.burn_in", 0.0);
  if (spec.burn_steps() >= spec.grid.n_steps()) throw cfg.field_error("sweep.burn_in", "covers the whole horizon");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.source() + ": " + e.what());
  }
  return spec;
}

// -------------------------------------------------------------- provenance

inline Provenance base_provenance(std::string_view command, std::uint64_t seed, const SimGrid& grid) {
  return {{"tool", std::string(kToolVersion)},
          {"command", std::string(command)},
          {"seed", std::to_string(seed)},
          {"seed_scheme", "mt19937_64 seeded by splitmix64(base, experiment, cell, replicate, stream)"},
          {"grid.dt", format_number(grid.dt())},
          {"grid.t_end", format_number(grid.t_end())},
          {"grid.n_steps", std::to_string(grid.n_steps())}};
}

inline std::string gate_list(const std::vector<GateKind>& gates) {
  std::string s;
  for (GateKind g : gates) s += (s.empty() ? "" : ",") + std::string(to_string(g));
  return s;
}

inline void add_lsr(Provenance& p, const LsrParams& lsr) {
  p.emplace_back("lsr.alpha", format_number(lsr.alpha));
  p.emplace_back("lsr.beta", format_number(lsr.beta));
  p.emplace_back("lsr.y_lo", format_number(lsr.y_lo));
  p.emplace_back("lsr.y_hi", format_number(lsr.y_hi));
  p.emplace_back("lsr.native", std::string(to_string(lsr.native)));
}

// --------------------------------------------------------------------- I/O

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

// ---------------------------------------------------------------- simulate

struct SimulateSettings {
  SimGrid grid{0.1, 5000.0};
  ChannelParams channel{};
  TelegraphParams rates{};
  double mu_star = 1.0;
  double sigma0_star = 0.75;
  std::vector<GateKind> gates{GateKind::NOR};
  LsrParams lsr{};
  std::uint64_t seed = 1;
  std::size_t stride = 1;
  bool svg = true;
};

inline SimulateSettings simulate_settings(const Config& cfg) {
  SimulateSettings s;
  s.grid = grid_settings(cfg, 5000.0);
  s.channel = channel_settings(cfg);
  s.rates = rate_settings(cfg);
  if (s.rates.r_on * s.grid.dt() >= kMaxRateTimesDt) throw cfg.field_error("input.r_on", "r_on * dt is too large");
  if (s.rates.r_off * s.grid.dt() >= kMaxRateTimesDt) throw cfg.field_error("input.r_off", "r_off * dt is too large");
  s.mu_star = detail::finite(cfg, "gate.mu_star", s.channel.mu);
  s.sigma0_star = detail::positive(cfg, "gate.sigma0_star", s.channel.sigma0());
  s.gates = gate_settings(cfg);
  s.lsr = lsr_settings(cfg);
  s.seed = seed_setting(cfg);
  const auto stride = cfg.get_uint("simulate.stride", 1);
  if (stride < 1) throw cfg.field_error("simulate.stride", "must be >= 1");
  s.stride = static_cast<std::size_t>(stride);
  s.svg = cfg.get_bool("simulate.svg", true);
  return s;
}

inline Provenance simulate_provenance(const SimulateSettings& s) {
  Provenance p = base_provenance("simulate", s.seed, s.grid);
  p.emplace_back("input.mu", format_number(s.channel.mu));
  p.emplace_back("input.sigma", format_number(s.channel.sigma));
  p.emplace_back("input.q", format_number(s.channel.q));
  p.emplace_back("input.sigma0", format_number(s.channel.sigma0()));
  p.emplace_back("input.r_on", format_number(s.rates.r_on));
  p.emplace_back("input.r_off", format_number(s.rates.r_off));
  p.emplace_back("gate.mu_star", format_number(s.mu_star));
  p.emplace_back("gate.sigma0_star", format_number(s.sigma0_star));
  p.emplace_back("gate.gates", gate_list(s.gates));
  add_lsr(p, s.lsr);
  p.emplace_back("simulate.stride", std::to_string(s.stride));
  return p;
}

/// Column order of the trajectory CSV; truth_<gate> follows for each gate.
inline std::vector<std::string> trajectory_header(const std::vector<GateKind>& gates) {
  std::vector<std::string> h{"t", "x1", "x2", "u1", "u2", "i", "z1", "z2", "z3", "y_lsr"};
  for (GateKind g : gates) h.push_back("truth_" + std::string(to_string(g)));
  return h;
}

struct Trajectory {
  BooleanPath x1, x2;
  SignalPath u1, u2, combined;
  PosteriorPath posterior;
  AnalogPath lsr;
};

/// Streams 0, 1: inputs; 2, 3: physical channel noise.  The combined channel
/// uses (xi1 + xi2) / sqrt(2), so at q = 1 it equals u1 + u2.
inline Trajectory simulate_trajectory(const SimulateSettings& s) {
  auto seed = [&](std::uint64_t stream) { return derive_seed({s.seed, 0, 0, 0, stream}); };
  BooleanPath x1 = sample_telegraph(s.rates, s.grid, seed(0));
  BooleanPath x2 = sample_telegraph(s.rates, s.grid, seed(1));
  const auto xi1 = gaussian_increments(s.grid, seed(2));
  const auto xi2 = gaussian_increments(s.grid, seed(3));
  std::vector<double> xi0(xi1.size());
  for (std::size_t k = 0; k < xi0.size(); ++k) xi0[k] = (xi1[k] + xi2[k]) / std::sqrt(2.0);
  const ChannelParams single{s.channel.mu, s.channel.sigma, 0.0};
  SignalPath u1 = emit_physical(x1, single, xi1);
  SignalPath u2 = emit_physical(x2, single, xi2);
  SignalPath combined = emit_combined(aggregate_chi(x1, x2), s.channel, xi0);
  PosteriorPath posterior = run_filter(combined, GateModel(s.mu_star, s.sigma0_star, s.rates.r_on, s.rates.r_off));
  AnalogPath lsr = run_lsr(combined, s.lsr, 0.0);
  return {std::move(x1), std::move(x2), std::move(u1), std::move(u2), std::move(combined), std::move(posterior),
          std::move(lsr)};
}

inline std::string trajectory_svg(const SimulateSettings& s, const Trajectory& t, const Provenance& prov) {
  std::vector<double> time(s.grid.n_steps());
  for (std::size_t k = 0; k < time.size(); ++k) time[k] = s.grid.time(k);
  auto series = [](std::string name, std::vector<double> y) { return Series{std::move(name), {}, std::move(y), false}; };
  const GateKind g = s.gates.front();
  const BooleanPath truth = truth_path(t.x1, t.x2, g);
  const AnalogPath a = gate_readout(t.posterior, g);
  std::vector<double> z1, z2, z3;
  for (const auto& z : t.posterior.z) z1.push_back(z[0]), z2.push_back(z[1]), z3.push_back(z[2]);
  std::vector<Panel> panels{
      {"U1", {series("u1", t.u1.samples)}, std::nullopt},
      {"U2", {series("u2", t.u2.samples)}, std::nullopt},
      {"I", {series("i", t.combined.samples)}, std::nullopt},
      {"posterior z1, z2, z3", {series("z1", z1), series("z2", z2), series("z3", z3)}, std::pair{0.0, 1.0}},
      {"Bayesian " + std::string(to_string(g)) + " readout", {series("a", a.samples)}, std::pair{0.0, 1.0}},
      {"LSR state y", {series("y", t.lsr.samples)}, std::nullopt},
  };
  return time_series_panels(time, panels, truth.samples,
                            "Sample paths (shaded: ideal " + std::string(to_string(g)) + " = 1)", prov);
}

inline int cmd_simulate(const Config& cfg, std::ostream& log = std::cerr) {
  const SimulateSettings s = simulate_settings(cfg);
  const auto out_dir = out_setting(cfg);
  const Trajectory t = simulate_trajectory(s);
  const Provenance prov = simulate_provenance(s);

  std::ostringstream csv;
  CsvWriter writer(csv, prov, trajectory_header(s.gates));
  std::vector<std::string> row;
  for (std::size_t k = 0; k < s.grid.n_steps(); k += s.stride) {
    const Vec3& z = t.posterior.z[k];
    row = {format_number(s.grid.time(k)), std::to_string(t.x1[k]), std::to_string(t.x2[k]),
           format_number(t.u1[k]),       format_number(t.u2[k]),  format_number(t.combined[k]),
           format_number(z[0]),          format_number(z[1]),     format_number(z[2]),
           format_number(t.lsr[k])};
    for (GateKind g : s.gates) row.push_back(std::to_string(ideal_gate(t.x1[k], t.x2[k], g)));
    writer.write_row(row);
  }
  ensure_dir(out_dir);
  write_file(out_dir / "trajectory.csv", csv.str());
  log << "wrote " << (out_dir / "trajectory.csv").string() << '\n';
  if (s.svg) {
    write_file(out_dir / "trajectory.svg", trajectory_svg(s, t, prov));
    log << "wrote " << (out_dir / "trajectory.svg").string() << '\n';
  }
  if (t.posterior.stats.saturations > 0) {
    log << "note: log-odds clamp engaged " << t.posterior.stats.saturations << " times\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

inline Provenance sweep_provenance(const SweepSpec& spec) {
  Provenance p = base_provenance("sweep", spec.base_seed, spec.grid);
  auto axis = [](const Axis& a) {
    return format_number(a.min) + ", " + format_number(a.max) + ", " + std::to_string(a.count) +
           (a.log_scale ? ", log" : ", linear");
  };
  p.emplace_back("sweep.experiment", std::string(to_string(spec.kind)));
  p.emplace_back("sweep.axis1", axis(spec.axis1));
  if (spec.kind != ExperimentKind::SigmaSweep) p.emplace_back("sweep.axis2", axis(spec.axis2));
  p.emplace_back("sweep.replicates", std::to_string(spec.replicates));
  p.emplace_back("sweep.common_random_numbers", spec.common_random_numbers ? "true" : "false");
  p.emplace_back("sweep.decoder", spec.decoder == ChannelDecoder::Bayesian ? "bayesian" : "threshold");
  p.emplace_back("sweep.burn_in", format_number(spec.burn_in.value_or(default_burn_in(spec.rates))));
  std::string mis;
  for (double v : spec.mismatched_sigma0_star) mis += (mis.empty() ? "" : ",") + format_number(v);
  if (!mis.empty()) p.emplace_back("sweep.mismatched_sigma0_star", mis);
  p.emplace_back("input.mu", format_number(spec.mu));
  p.emplace_back("input.r_on", format_number(spec.rates.r_on));
  p.emplace_back("input.r_off", format_number(spec.rates.r_off));
  p.emplace_back("gate.gates", gate_list(spec.gates));
  add_lsr(p, spec.lsr);
  return p;
}

/// Coordinates, then `<value>` (replicate mean) and `<value>_se` for every
/// value column, then `error`.
inline std::vector<std::string> sweep_header(const ReportTable& table) {
  std::vector<std::string> h = table.coord_names;
  for (const auto& v : table.value_names) {
    h.push_back(v);
    h.push_back(v + "_se");
  }
  h.push_back("error");
  return h;
}

inline std::string sweep_csv(const ReportTable& table, const Provenance& prov) {
  std::ostringstream out;
  CsvWriter writer(out, prov, sweep_header(table));
  for (const auto& r : table.rows) {
    std::vector<std::string> row;
    for (double c : r.coords) row.push_back(format_number(c));
    for (const auto& v : r.values) {
      row.push_back(format_number(v.mean));
      row.push_back(v.se ? format_number(*v.se) : "nan");
    }
    row.push_back(r.error);
    writer.write_row(row);
  }
  return out.str();
}

struct NamedFile {
  std::string name;
  std::string content;
};

inline std::vector<NamedFile> sweep_svgs(const SweepSpec& spec, const ReportTable& table, const Provenance& prov) {
  const std::string stem(to_string(spec.kind));
  std::vector<NamedFile> files;
  if (spec.kind == ExperimentKind::SigmaSweep) {
    std::vector<Series> series;
    for (std::size_t v = 0; v < table.value_names.size(); ++v) {
      Series s{table.value_names[v], {}, {}, table.value_names[v].find("lsr") != std::string::npos};
      for (const auto& r : table.rows) {
        s.x.push_back(r.coords[0]);
        s.y.push_back(r.values[v].mean);
      }
      series.push_back(std::move(s));
    }
    files.push_back({stem + ".svg", line_chart(series, "Error rate versus input noise", "sigma0", "error rate", true, prov)});
    return files;
  }
  const auto xs = spec.axis1.values();
  const auto ys = spec.axis2.values();
  const std::size_t ny = ys.size();
  // rows are stored x-major: row index = ix * ny + iy
  auto grid_of = [&](std::size_t value, bool transpose) {
    std::vector<std::vector<double>> m;
    if (!transpose) {
      m.assign(ny, std::vector<double>(xs.size()));
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) m[iy][ix] = table.rows[ix * ny + iy].values[value].mean;
      }
    } else {
      m.assign(xs.size(), std::vector<double>(ny));
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) m[ix][iy] = table.rows[ix * ny + iy].values[value].mean;
      }
    }
    return m;
  };
  if (spec.kind == ExperimentKind::MismatchGrid) {
    const char* titles[] = {"total error", "delay error", "excess error"};
    for (GateKind g : spec.gates) {
      const char* suffixes[] = {"er", "ed", "ee"};
      for (int m = 0; m < 3; ++m) {
        const std::string col = std::string(to_string(g)) + "_" + suffixes[m];
        HeatmapSpec h;
        h.title = std::string(to_string(g)) + " " + titles[m];
        h.x_label = "sigma0";
        h.y_label = "sigma0*";
        h.x = xs;
        h.y = ys;
        h.values = grid_of(table.value_index(col), false);
        h.diagonal = true;
        files.push_back({stem + "_" + col + ".svg", heatmap(h, prov)});
      }
    }
  } else {
    for (GateKind g : spec.gates) {
      const std::string col = std::string(to_string(g)) + "_eta";
      HeatmapSpec h;
      h.title = std::string(to_string(g)) + " performance ratio eta";
      h.x_label = "q";
      h.y_label = "sigma";
      h.x = ys;
      h.y = xs;
      h.values = grid_of(table.value_index(col), true);
      h.band_width_decades = 0.1;
      h.highlight_level = 1.0;
      files.push_back({stem + "_" + col + ".svg", heatmap(h, prov)});
    }
  }
  return files;
}

inline int cmd_sweep(const Config& cfg, std::ostream& log = std::cerr, bool show_progress = true) {
  const SweepSpec spec = sweep_settings(cfg);
  const auto out_dir = out_setting(cfg);
  ensure_dir(out_dir);
  RunOptions options;
  options.threads = thread_setting(cfg);
  std::size_t last_pct = 101;
  if (show_progress) {
    options.progress = [&](std::size_t done, std::size_t total) {
      const std::size_t pct = done * 100 / total;
      if (pct / 10 != last_pct / 10) log << "  " << pct << "% (" << done << "/" << total << " tasks)\n";
      last_pct = pct;
    };
  }
  const ReportTable table = run_sweep(spec, options);
  const Provenance prov = sweep_provenance(spec);
  const std::string stem(to_string(spec.kind));
  write_file(out_dir / (stem + ".csv"), sweep_csv(table, prov));
  log << "wrote " << (out_dir / (stem + ".csv")).string() << '\n';
  for (const auto& f : sweep_svgs(spec, table, prov)) {
    write_file(out_dir / f.name, f.content);
    log << "wrote " << (out_dir / f.name).string() << '\n';
  }
  for (const auto& r : table.rows) {
    if (!r.error.empty()) log << "warning: cell " << format_number(r.coords[0]) << ": " << r.error << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- validate

inline nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["tolerance"] = r.tolerance;
  j["measured"] = nlohmann::json::object();
  for (const auto& [k, v] : r.measured) j["measured"][k] = v;
  return j;
}

inline std::vector<CheckResult> run_validation(const Config& cfg) {
  const std::uint64_t seed = seed_setting(cfg);
  const auto steps = cfg.get_uint("validate.steps", 2'000'000);
  const auto probes = cfg.get_int("validate.probes", 1000);
  const auto starts = cfg.get_int("validate.starts", 100);
  if (steps < 1) throw cfg.field_error("validate.steps", "must be >= 1");
  if (probes < 1) throw cfg.field_error("validate.probes", "must be >= 1");
  if (starts < 1) throw cfg.field_error("validate.starts", "must be >= 1");
  const double dt = 0.1;
  return {check_simplex_conservation(SimGrid(dt, dt * static_cast<double>(steps)), seed),
          check_drift_antisymmetry(static_cast<int>(probes), seed),
          check_oracle_convergence(seed),
          check_generator_stationarity(static_cast<int>(starts), seed),
          check_lsr_fixed_points(),
          check_evidence_monotonicity()};
}

inline int cmd_validate(const Config& cfg, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
  const auto checks = run_validation(cfg);
  nlohmann::json report;
  report["tool"] = std::string(kToolVersion);
  report["seed"] = seed_setting(cfg);
  bool all = true;
  report["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    report["checks"].push_back(to_json(c));
  }
  report["passed"] = all;
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (cfg.has("run.out")) {
    const auto dir = out_setting(cfg);
    ensure_dir(dir);
    write_file(dir / "validation.json", text);
    log << "wrote " << (dir / "validation.json").string() << '\n';
  }
  return all ? kExitOk : kExitValidationFailed;
}

/// Runs a command and maps exceptions to exit codes.
inline int run_command(const std::function<int()>& command, std::ostream& err = std::cerr) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitBadConfig;
  }
}

}  // namespace bgate::report
