#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bgate/report/commands.hpp"

using namespace bgate;
using namespace bgate::report;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Config config_from(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test.ini");
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bgate_test_" + name);
  fs::remove_all(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BGATE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("numbers round-trip through 17 significant digits") {
  RandomStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(rng.normal(), static_cast<int>(rng.uniform() * 200) - 100);
    REQUIRE(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::isnan(*parse_number(format_number(std::nan("")))));
  CHECK_FALSE(parse_number("1.5x").has_value());
}

TEST_CASE("csv quoting and reading") {
  std::ostringstream out;
  CsvWriter w(out, {{"tool", "x"}, {"note", "a = b"}}, {"name", "value"});
  w.write_row({"plain", "1"});
  w.write_row({"with,comma", "2"});
  w.write_row({"with \"quote\"", "3"});
  w.write_row({"two\nlines", "4"});
  const std::string text = out.str();
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  const CsvTable t = read_csv(in);
  CHECK(t.provenance == Provenance{{"tool", "x"}, {"note", "a = b"}});
  CHECK(t.header == std::vector<std::string>{"name", "value"});
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[1][0] == "with,comma");
  CHECK(t.rows[2][0] == "with \"quote\"");
  CHECK(t.rows[3][0] == "two\nlines");
  CHECK(t.rows[3][1] == "4");
}

TEST_CASE("config parsing diagnostics") {
  const auto cfg = config_from("# comment\n[input]\nsigma = 0.5 ; trailing\nmu=2\n\n[run]\nseed = 9\n");
  CHECK(cfg.get_double("input.sigma", 0) == 0.5);
  CHECK(cfg.get_double("input.mu", 0) == 2.0);
  CHECK(cfg.get_uint("run.seed", 0) == 9);
  CHECK(cfg.get_double("input.q", 0.25) == 0.25);

  auto message = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message([] { config_from("[input]\nsigmaa = 1\n"); }) == "test.ini:2: unknown field 'input.sigmaa'");
  CHECK(message([] { config_from("[input\n"); }) == "test.ini:1: unterminated section header");
  CHECK(message([] { config_from("[input]\nsigma\n"); }) == "test.ini:2: expected 'key = value'");
  const auto bad = config_from("[input]\n\nsigma = -0.5\n");
  CHECK(message([&] { simulate_settings(bad); }).find("test.ini:3: field 'input.sigma'") == 0);
  const auto word = config_from("[input]\nsigma = abc\n");
  CHECK(message([&] { channel_settings(word); }).find("field 'input.sigma': expected a number") != std::string::npos);
  CHECK(message([] { config_from("[gate]\ngates = nor, xnor\n").get_list("gate.gates", {}); }) == "no error");
  CHECK(message([] { gate_settings(config_from("[gate]\ngates = nor, xnor\n")); }).find("unknown gate 'xnor'") !=
        std::string::npos);
  CHECK(message([] { sweep_settings(config_from("[sweep]\nexperiment = nope\n")); }).find("sweep.experiment") !=
        std::string::npos);
  CHECK(message([] { sweep_settings(config_from("[sweep]\naxis1 = 0.3, 1.2\n")); }).find("sweep.axis1") !=
        std::string::npos);
}

TEST_CASE("simulate writes the documented schema deterministically") {
  const auto dir = scratch("simulate");
  Config cfg = config_from("[grid]\nt_end = 500\n[gate]\ngates = nor\n");
  cfg.set("run.out", dir.string());
  std::ostringstream log;
  REQUIRE(cmd_simulate(cfg, log) == kExitOk);
  const auto first = slurp(dir / "trajectory.csv");
  const CsvTable t = read_csv_file((dir / "trajectory.csv").string());
  CHECK(t.header == std::vector<std::string>{"t", "x1", "x2", "u1", "u2", "i", "z1", "z2", "z3", "y_lsr", "truth_nor"});
  CHECK(t.rows.size() == 5000);
  bool has_seed = false, has_version = false;
  for (const auto& [k, v] : t.provenance) {
    has_seed |= k == "seed" && v == "1";
    has_version |= k == "tool" && v == kToolVersion;
  }
  CHECK(has_seed);
  CHECK(has_version);
  for (const auto& row : t.rows) {
    const double z = *parse_number(row[6]) + *parse_number(row[7]) + *parse_number(row[8]);
    REQUIRE(std::abs(z - 1.0) < 1e-15);
    const int truth = (row[1] == "0" && row[2] == "0") ? 1 : 0;
    REQUIRE(row[10] == std::to_string(truth));
  }
  const auto svg = slurp(dir / "trajectory.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<metadata>") != std::string::npos);
  CHECK(svg.find("</svg>\n") == svg.size() - 7);

  REQUIRE(cmd_simulate(cfg, log) == kExitOk);
  CHECK(slurp(dir / "trajectory.csv") == first);
  cfg.set("run.seed", "2");
  REQUIRE(cmd_simulate(cfg, log) == kExitOk);
  CHECK(slurp(dir / "trajectory.csv") != first);
  fs::remove_all(dir);
}

TEST_CASE("sweep outputs") {
  const auto dir = scratch("sweep");
  SECTION("mismatch grid") {
    Config cfg = config_from(
        "[grid]\nt_end = 2000\n[sweep]\nexperiment = mismatch-grid\naxis1 = 0.2, 1.2, 4\naxis2 = 0.2, 1.2, 4\n"
        "replicates = 2\nburn_in = 100\n");
    cfg.set("run.out", dir.string());
    std::ostringstream log;
    REQUIRE(cmd_sweep(cfg, log, false) == kExitOk);
    const CsvTable t = read_csv_file((dir / "mismatch-grid.csv").string());
    CHECK(t.rows.size() == 16);
    CHECK(t.header == std::vector<std::string>{"sigma0", "sigma0_star", "nor_er", "nor_er_se", "nor_ed", "nor_ed_se",
                                               "nor_ee", "nor_ee_se", "error"});
    for (const char* m : {"er", "ed", "ee"}) CHECK(fs::exists(dir / ("mismatch-grid_nor_" + std::string(m) + ".svg")));
  }
  SECTION("q grid") {
    Config cfg = config_from("[grid]\nt_end = 2000\n[sweep]\nexperiment = q-grid\nreplicates = 2\nburn_in = 100\n");
    cfg.set("run.out", dir.string());
    std::ostringstream log;
    REQUIRE(cmd_sweep(cfg, log, false) == kExitOk);
    const CsvTable t = read_csv_file((dir / "q-grid.csv").string());
    CHECK(t.rows.size() == 20);
    for (const char* c : {"sigma", "q", "sigma0", "nor_er_q", "nor_er_u", "nor_eta", "nor_eta_se"}) {
      CHECK_NOTHROW(t.column(c));
    }
    CHECK(fs::exists(dir / "q-grid_nor_eta.svg"));
  }
  SECTION("sigma sweep") {
    Config cfg = config_from("[grid]\nt_end = 2000\n[sweep]\nreplicates = 2\nburn_in = 100\n");
    cfg.set("run.out", dir.string());
    std::ostringstream log;
    REQUIRE(cmd_sweep(cfg, log, false) == kExitOk);
    CHECK(read_csv_file((dir / "sigma-sweep.csv").string()).rows.size() == 10);
    CHECK(slurp(dir / "sigma-sweep.svg").find("nor_lsr_er") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("validate report") {
  Config cfg = config_from("[validate]\nsteps = 20000\nprobes = 100\nstarts = 3\n");
  std::ostringstream out, log;
  CHECK(cmd_validate(cfg, out, log) == kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() == 6);
  CHECK(j["checks"][0]["name"] == "simplex_conservation");
  CHECK(j["checks"][0]["measured"].contains("max_abs_sum_minus_one"));
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("cli");
  CHECK(run_cli("simulate --out " + dir.string() + " --set grid.t_end=100") == 0);
  CHECK(run_cli("simulate --out " + dir.string() + " --set input.sigma=0") == 2);
  CHECK(run_cli("simulate --config /nonexistent/x.ini") == 3);
  CHECK(run_cli("simulate --out /proc/forbidden/x --set grid.t_end=100") == 3);
  CHECK(run_cli("simulate --gate xnor") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("validate --set validate.steps=1000 --set validate.starts=2 --set validate.probes=10") == 0);
  fs::remove_all(dir);
}
