// Acceptance suite: one PASS/FAIL line per criterion.  Optional arguments
// select criteria by number, e.g. `acceptance 1 3 7`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bgate/bgate.hpp"
#include "bgate/report/csv.hpp"

using namespace bgate;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

RunOptions run_options() {
  RunOptions o;
  o.threads = threads();
  return o;
}

// Reference operating point: mu = 1, sigma0 = sigma0* = 0.75, r = 1/1000.
Outcome simplex_conservation() {
  const auto sum = check_simplex_conservation(SimGrid(0.1, 2e5), 1);
  const auto anti = check_drift_antisymmetry(1000, 1);
  return {sum.passed && anti.passed,
          "max|sum z - 1| = " + num(sum.measured.at("max_abs_sum_minus_one")) + " over " +
              num(sum.measured.at("steps"), 7) + " steps (tol " + num(sum.tolerance) + "), max|z.Bz| = " +
              num(anti.measured.at("max_abs_zBz")) + " over 1000 probes (tol 1e-12)"};
}

Outcome oracle_equivalence() {
  const auto r = check_oracle_convergence(1);
  return {r.passed, "gaps " + num(r.measured.at("gap_dt_1e-2")) + ", " + num(r.measured.at("gap_dt_1e-3")) + ", " +
                        num(r.measured.at("gap_dt_1e-4")) + " at dt = 1e-2, 1e-3, 1e-4; order " +
                        num(r.measured.at("order")) + " (need 1.0 +- 0.3)"};
}

Outcome lsr_fixed_points() {
  const auto r = check_lsr_fixed_points();
  return {r.passed, "upper " + num(r.measured.at("upper"), 10) + " (2.1667), lower " +
                        num(r.measured.at("lower"), 10) + " (-0.8333), tol 1e-6"};
}

Outcome sigma_sweep() {
  SweepSpec s;
  s.kind = ExperimentKind::SigmaSweep;
  s.axis1 = {0.3, 1.2, 10, false};
  s.grid = SimGrid(0.1, 2e5);
  s.replicates = 8;
  s.gates = {GateKind::NOR};
  const auto t = run_sweep(s, run_options());
  std::size_t best = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.at(r, "nor_lsr_er").mean < t.at(best, "nor_lsr_er").mean) best = r;
  }
  const double sigma_best = t.rows[best].coords[0];
  const double lsr_min = t.at(best, "nor_lsr_er").mean;
  const bool a = sigma_best > 0.6 && sigma_best < 0.8;
  bool b = true;
  std::string worst_b;
  double worst_margin = -1e300;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& bg = t.at(r, "nor_bg_er");
    const auto& lsr = t.at(r, "nor_lsr_er");
    const double allowance = 2.0 * std::hypot(*bg.se, *lsr.se);
    const double margin = bg.mean - lsr.mean - allowance;
    if (margin > 0) b = false;
    if (margin > worst_margin) {
      worst_margin = margin;
      worst_b = "sigma " + num(t.rows[r].coords[0], 3) + ": bg " + num(bg.mean) + " vs lsr " + num(lsr.mean);
    }
  }
  const double lo = t.at(0, "nor_lsr_er").mean;
  const double hi = t.at(t.rows.size() - 1, "nor_lsr_er").mean;
  const bool c = lo >= 3.0 * lsr_min && hi >= 3.0 * lsr_min;
  std::string curve;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    curve += (r ? " " : "") + num(t.rows[r].coords[0], 2) + ":" + num(t.at(r, "nor_bg_er").mean, 3) + "/" +
             num(t.at(r, "nor_lsr_er").mean, 3);
  }
  return {a && b && c, std::string("(a) ") + (a ? "ok" : "FAIL") + " LSR argmin sigma = " + num(sigma_best, 3) +
                           "; (b) " + (b ? "ok" : "FAIL") + " closest " + worst_b + "; (c) " + (c ? "ok" : "FAIL") +
                           " LSR(0.3)/min = " + num(lo / lsr_min, 3) + ", LSR(1.2)/min = " + num(hi / lsr_min, 3) +
                           "; sigma:bg/lsr " + curve};
}

Outcome mismatch_grid() {
  SweepSpec s;
  s.kind = ExperimentKind::MismatchGrid;
  s.axis1 = {0.2, 1.2, 8, false};
  s.axis2 = {0.2, 1.2, 8, false};
  s.grid = SimGrid(0.1, 2e5);
  s.replicates = 8;
  s.gates = {GateKind::NOR};
  const auto t = run_sweep(s, run_options());
  const auto x = s.axis1.values();
  const auto y = s.axis2.values();
  const std::size_t n = x.size();
  auto ee = [&](std::size_t i, std::size_t j) { return t.at(i * n + j, "nor_ee").mean; };
  auto ed = [&](std::size_t i, std::size_t j) { return t.at(i * n + j, "nor_ed").mean; };
  constexpr double eps = 1e-9;

  // (a) flat along sigma0 below the diagonal band
  bool a = true;
  double worst_ratio = 0.0;
  std::string worst_a;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] <= y[j] - 0.2 + eps) vals.push_back(ee(i, j));
    }
    if (vals.size() < 2) continue;
    const double lo = *std::min_element(vals.begin(), vals.end());
    const double hi = *std::max_element(vals.begin(), vals.end());
    const double ratio = lo > 0.0 ? hi / lo : INFINITY;
    if (!(ratio < 2.0)) a = false;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_a = "sigma0* " + num(y[j], 3) + ": E_E in [" + num(lo, 3) + ", " + num(hi, 3) + "] over " +
                std::to_string(vals.size()) + " cells";
    }
  }
  // (b) growth above the diagonal band, against the diagonal cell
  bool b = true;
  int checked_b = 0;
  double weakest = INFINITY;
  std::string weakest_b;
  for (std::size_t j = 0; j < n; ++j) {
    const double ref = ee(j, j);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] + eps < y[j] + 0.3) continue;
      ++checked_b;
      const double ratio = ref > 0.0 ? ee(i, j) / ref : INFINITY;
      if (!(ee(i, j) > 3.0 * ref)) b = false;
      if (ratio < weakest) {
        weakest = ratio;
        weakest_b = "sigma0 " + num(x[i], 3) + ", sigma0* " + num(y[j], 3) + ": " + num(ee(i, j), 3) + " vs diag " +
                    num(ref, 3);
      }
    }
  }
  // (c) delay error nondecreasing in sigma0*
  bool c = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      if (ed(i, j) < ed(i, j - 1)) c = false;
    }
  }
  std::string ed_row;
  for (std::size_t j = 0; j < n; ++j) ed_row += (j ? " " : "") + num(ed(0, j), 3);
  return {a && b && c, std::string("(a) ") + (a ? "ok" : "FAIL") + " worst max/min = " + num(worst_ratio, 3) +
                           " at " + worst_a + "; (b) " + (b ? "ok" : "FAIL") + " " + std::to_string(checked_b) +
                           " cells, weakest growth " + num(weakest, 3) + "x at " + weakest_b + "; (c) " +
                           (c ? "ok" : "FAIL") + " E_D over sigma0* = " + ed_row};
}

Outcome q_grid() {
  SweepSpec s;
  s.kind = ExperimentKind::QGrid;
  s.axis1 = {0.3, 1.2, 4, false};
  s.axis2 = {0.0, 1.0, 5, false};
  s.grid = SimGrid(0.1, 2e5);
  s.replicates = 8;
  s.gates = {GateKind::NOR};
  const auto t = run_sweep(s, run_options());
  const auto sig = s.axis1.values();
  const auto qs = s.axis2.values();
  auto eta = [&](std::size_t i, std::size_t j) { return t.at(i * qs.size() + j, "nor_eta").mean; };
  const double corner_noisy = eta(sig.size() - 1, 0);
  const double corner_clean = eta(0, qs.size() - 1);
  const bool a = corner_noisy < 1.0;
  const bool b = corner_clean > 1.0;
  const double band = std::pow(10.0, 0.1);
  bool c = true;
  double prev = -INFINITY;
  std::string qmax;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    double largest = -INFINITY;
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (eta(i, j) < band) largest = qs[j];
    }
    if (largest < prev) c = false;
    prev = largest;
    qmax += (i ? " " : "") + num(sig[i], 2) + ":" + (std::isfinite(largest) ? num(largest, 3) : "none");
  }
  std::string grid;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    grid += (i ? " | " : "");
    for (std::size_t j = 0; j < qs.size(); ++j) grid += (j ? " " : "") + num(eta(i, j), 3);
  }
  return {a && b && c, std::string("(a) ") + (a ? "ok" : "FAIL") + " eta(1.2, 0) = " + num(corner_noisy) + "; (b) " +
                           (b ? "ok" : "FAIL") + " eta(0.3, 1) = " + num(corner_clean) + "; (c) " +
                           (c ? "ok" : "FAIL") + " largest q with eta < 10^0.1 per sigma: " + qmax +
                           "; eta rows (sigma asc, q asc): " + grid};
}

Outcome generator_stationarity() {
  const auto r = check_generator_stationarity(100, 1);
  return {r.passed, "max deviation from (1/4, 1/2, 1/4) = " + num(r.measured.at("max_abs_deviation")) +
                        " over 100 starts (tol 1e-6)"};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "bgate_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cli = BGATE_CLI_PATH;
  struct Job {
    std::string name, args;
  };
  const std::vector<Job> jobs = {
      {"simulate", "simulate --seed 11 --set grid.t_end=20000 --gate nor --gate xor"},
      {"sweep-mismatch", "sweep --seed 12 --set sweep.experiment=mismatch-grid --set sweep.axis1=0.2,1.2,4 "
                         "--set sweep.axis2=0.2,1.2,4 --set sweep.replicates=3 --set grid.t_end=20000 "
                         "--set sweep.burn_in=1000"},
      {"sweep-q", "sweep --seed 13 --set sweep.experiment=q-grid --set sweep.replicates=2 --set grid.t_end=20000 "
                  "--set sweep.burn_in=1000"},
      {"sweep-sigma", "sweep --seed 14 --set sweep.replicates=2 --set grid.t_end=20000 --set sweep.burn_in=1000"},
  };
  std::size_t compared = 0;
  for (const auto& job : jobs) {
    std::vector<std::map<std::string, std::string>> runs;
    int k = 0;
    for (int th : {1, 1, 8}) {
      const fs::path out = root / (job.name + "_" + std::to_string(k++));
      const std::string cmd =
          cli + " " + job.args + " --threads " + std::to_string(th) + " --out " + out.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, job.name + ": command failed: " + cmd};
      runs.push_back(read_tree(out));
    }
    if (runs[0].empty()) return {false, job.name + ": no output files"};
    if (runs[0] != runs[1]) return {false, job.name + ": outputs differ between two identical runs"};
    if (runs[0] != runs[2]) return {false, job.name + ": outputs differ between 1 and 8 threads"};
    compared += runs[0].size();
  }
  fs::remove_all(root);
  return {true, std::to_string(compared) + " output files byte-identical across two runs and threads {1, 8}"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"simplex conservation", simplex_conservation},
      {"oracle equivalence", oracle_equivalence},
      {"LSR fixed points", lsr_fixed_points},
      {"error rate vs input noise", sigma_sweep},
      {"mismatch error surfaces", mismatch_grid},
      {"performance ratio map", q_grid},
      {"generator stationarity", generator_stationarity},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << id << " (" << criteria[c].first << ", "
              << num(secs, 3) << " s): " << o.detail << std::endl;
  }
  return failures ? 1 : 0;
}
