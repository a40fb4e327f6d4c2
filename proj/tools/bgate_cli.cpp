// bgate: simulate trajectories, run experiment sweeps, validate invariants.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bgate/report/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::vector<std::string> gates;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "configuration file (INI sections of key = value)");
  cmd->add_option("--seed", f.seed, "base random seed (run.seed)");
  cmd->add_option("--out", f.out, "output directory (run.out)");
  cmd->add_option("--threads", f.threads, "worker threads (run.threads)");
  cmd->add_option("--gate", f.gates, "gate kind; repeatable (gate.gates)")
      ->check(CLI::IsMember({"nor", "xor", "and", "or", "nand"}));
  cmd->add_option("--set", f.overrides, "override a field, section.key=value; repeatable");
}

bgate::report::Config merged_config(const Flags& f) {
  using bgate::report::Config;
  Config cfg = f.config.empty() ? Config{} : Config::load(f.config);
  for (const auto& o : f.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw bgate::report::ConfigError("--set expects section.key=value, got '" + o + "'");
    cfg.set(bgate::report::trim(o.substr(0, eq)), bgate::report::trim(o.substr(eq + 1)));
  }
  if (f.seed) cfg.set("run.seed", std::to_string(*f.seed));
  if (f.out) cfg.set("run.out", *f.out);
  if (f.threads) cfg.set("run.threads", std::to_string(*f.threads));
  if (!f.gates.empty()) {
    std::string joined;
    for (const auto& g : f.gates) joined += (joined.empty() ? "" : ",") + g;
    cfg.set("gate.gates", joined);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian logic gates over a noisy summed signal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bgate::report::kToolVersion));
  Flags flags;
  auto* simulate = app.add_subcommand("simulate", "write one sample trajectory as CSV (and SVG)");
  auto* sweep = app.add_subcommand("sweep", "run an experiment grid; write CSV and SVG");
  auto* validate = app.add_subcommand("validate", "run invariant and oracle checks; print a JSON report");
  for (auto* cmd : {simulate, sweep, validate}) add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bgate::report::kExitBadConfig;
  }

  return bgate::report::run_command([&] {
    const auto cfg = merged_config(flags);
    if (simulate->parsed()) return bgate::report::cmd_simulate(cfg);
    if (sweep->parsed()) return bgate::report::cmd_sweep(cfg);
    return bgate::report::cmd_validate(cfg);
  });
}
