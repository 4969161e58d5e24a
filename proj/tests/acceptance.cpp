// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "blocksim/experiments.hpp"
#include "blocksim/sim_infinite.hpp"
#include "blocksim/sim_matrix.hpp"
#include "blocksim/sim_network.hpp"
#include "blocksim/validation.hpp"
#include "cli.hpp"

using namespace blocksim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void note(const std::string& text) {
  std::printf("       %s\n", text.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void engine_equivalence() {
  ValidationOptions options;
  options.random_configs = 120;
  options.max_n = 500;
  const auto start = std::chrono::steady_clock::now();
  const auto suite = check_engine_equivalence(options);
  const double elapsed = seconds_since(start);
  for (const auto& d : suite.details) note(d);
  report(1, suite.passed() && elapsed < 60.0,
         std::to_string(suite.cases) + " configs, " + std::to_string(suite.failures) +
             " mismatches, " + fmt("%.2f s", elapsed));
}

void pruning_exactness() {
  ValidationOptions options;
  options.random_configs = 60;
  options.max_n = 2000;
  const auto suite = check_pruning_exactness(options);
  for (const auto& d : suite.details) note(d);
  report(2, suite.passed(),
         std::to_string(suite.cases) + " runs, " + std::to_string(suite.failures) +
             " step mismatches");
}

double mean_p(const DistributionSpec& beta, std::size_t n, std::size_t reps, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.engine = Engine::infinite;
  cfg.n = n;
  cfg.alpha = make_exponential(1.0);
  cfg.beta = beta;
  return run_replications(cfg, reps, seed).mean;
}

void small_delay_limit() {
  bool ok = true;
  std::string worst;
  double worst_err = 0.0;
  for (double r : {0.01, 0.1, 0.5, 1.0}) {
    const double predicted = 1.0 / (1.0 + r);
    const double got = mean_p(make_exponential(r), 2000, 200, 1);
    const double err = std::abs(got - predicted);
    note(fmt("exponential delay r=%g: mean p %.5f, predicted %.5f, |diff| %.5f", r, got,
             predicted, err));
    if (err > 0.02) ok = false;
    if (err > worst_err) {
      worst_err = err;
      worst = fmt("r=%g", r);
    }
  }
  for (double r : {0.01, 0.1, 0.5, 1.0}) {
    const double predicted = 1.0 / (1.0 + r);
    const double got = mean_p(make_constant(r), 2000, 200, 1);
    note(fmt("(info) constant delay r=%g: mean p %.5f, predicted %.5f, |diff| %.5f", r, got,
             predicted, std::abs(got - predicted)));
  }
  report(3, ok, "exponential delay, worst |diff| " + fmt("%.4f", worst_err) + " at " + worst +
                    " (tolerance 0.02)");
}

void convergence() {
  ConvergencePlan plan;
  plan.base.n = 1000;
  plan.base.alpha = make_exponential(1.0);
  plan.base.beta = make_exponential(0.1);
  plan.ms = {10, 100, 1000};
  plan.replications = 200;
  plan.seed = 1;
  const auto rows = convergence_experiment(plan);
  const auto& inf = rows.back().estimate;
  std::vector<double> gaps, slack;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& e = rows[i].estimate;
    gaps.push_back(std::abs(e.mean - inf.mean));
    slack.push_back(std::hypot(e.std_error, inf.std_error));
    note(fmt("m=%g: mean %.5f (se %.5f), gap %.5f", static_cast<double>(*rows[i].m), e.mean,
             e.std_error, gaps.back()));
  }
  note(fmt("unbounded: mean %.5f (se %.5f)", inf.mean, inf.std_error));
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] > gaps[i - 1] + slack[i]) monotone = false;
  }
  report(4, gaps.back() < 0.01 && monotone,
         fmt("gap at m=1000 %.5f (< 0.01), non-increasing within one SE: ", gaps.back()) +
             (monotone ? "yes" : "no"));
}

void distribution_agreement() {
  HistogramPlan plan;
  plan.base.m = 100;
  plan.base.n = 1000;
  plan.base.alpha = make_exponential(1.0);
  plan.base.beta = make_exponential(0.1);
  plan.replications = 1000;
  plan.seed = 1;
  const auto result = pdf_histogram_experiment(plan);

  HistogramPlan chaotic = plan;
  chaotic.base.m = 1000;
  chaotic.base.beta = make_exponential(10.0);
  chaotic.replications = 200;
  const auto wild = pdf_histogram_experiment(chaotic);
  note(fmt("(info) chaotic m=1000 beta mean 10: KS %.4f, mean shift %.5f", wild.ks_distance,
           wild.mean_shift));
  report(5, result.ks_distance < 0.1,
         fmt("m=100, 1000 reps each: KS %.4f (< 0.1), mean shift %.5f", result.ks_distance,
             result.mean_shift));
}

void mixture_bound() {
  const auto suite = check_mixture_bound(10000);
  for (const auto& d : suite.details) note(d);
  report(6, suite.passed(),
         std::to_string(suite.cases) + " (distribution, m) pairs on a 10^4-point grid, " +
             std::to_string(suite.failures) + " violations");
}

void degenerate_cases() {
  bool ok = true;
  std::size_t runs = 0;
  for (std::uint64_t seed : {1u, 2u, 3u, 42u, 9001u}) {
    NetSimConfig single;
    single.m = 1;
    single.n = 500;
    single.beta = make_exponential(3.0);
    single.seed = seed;
    NetSimConfig instant = single;
    instant.m = 7;
    instant.beta = make_constant(0.0);
    for (const auto& cfg : {single, instant}) {
      ok &= simulate_network(cfg).p_n == 1.0;
      ok &= simulate_matrix(cfg).p_n == 1.0;
      runs += 2;
    }
    InfSimConfig inf;
    inf.n = 500;
    inf.beta = make_constant(0.0);
    inf.seed = seed;
    ok &= simulate_infinite(inf).p_n == 1.0;
    ++runs;
  }
  report(7, ok, std::to_string(runs) + " runs with m=1 or zero delay");
}

void hand_trace() {
  NetSimConfig cfg;
  cfg.m = 2;
  cfg.n = 5;
  cfg.alpha = make_constant(1.0);
  cfg.beta = make_constant(1.5);
  auto run = [&](bool matrix) {
    SampleStream production{0, 0};
    ScriptedStream producers{{0.25, 0.75}};
    SampleStream delays{0, 2};
    RunStreams streams{production, producers, delays};
    if (matrix) return MatrixSimulator(cfg, streams).finish().p_n;
    return simulate_network(cfg, streams).p_n;
  };
  const double net = run(false);
  const double mat = run(true);
  report(8, net == 0.6 && mat == 0.6,
         fmt("m=2, unit production, delay 1.5: network %.3f, matrix %.3f (expected 3/5)", net,
             mat));
}

void scaling() {
  auto time_run = [](std::size_t n) {
    InfSimConfig cfg;
    cfg.n = n;
    cfg.alpha = make_exponential(1.0);
    cfg.beta = make_exponential(0.1);
    cfg.seed = 1;
    const auto start = std::chrono::steady_clock::now();
    simulate_infinite(cfg);
    return seconds_since(start);
  };
  time_run(100000);
  const double t1 = time_run(1000000);
  const double t2 = time_run(2000000);
  report(9, t1 < 10.0 && t2 <= 2.5 * t1,
         fmt("unbounded engine r=0.1: n=1e6 %.3f s, n=2e6 %.3f s (ratio %.2f)", t1, t2, t2 / t1));
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0 && code != 1) note("cli error: " + err.str());
  return code;
}

void reproducibility() {
  const fs::path dir = fs::temp_directory_path() / ("blocksim_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool ok = true;
  const std::string out = (dir / "run.json").string();
  const std::string tree = (dir / "run.tree.json").string();
  ok &= cli({"simulate", "--engine", "network", "--m", "8", "--n", "400", "--beta", "exp:0.5",
             "--seed", "77", "--out", out, "--tree-out", tree}) == 0;
  ok &= cli({"rerun", out + ".manifest.json", "--out-dir", (dir / "again").string()}) == 0;
  ok &= slurp(out) == slurp(dir / "again" / "run.json");
  ok &= slurp(tree) == slurp(dir / "again" / "run.tree.json");

  const std::string csv = (dir / "eff.csv").string();
  ok &= cli({"experiment", "efficiency", "--n", "300", "--reps", "5", "--ratios", "0.1,1,10",
             "--seed", "5", "--out", csv}) == 0;
  ok &= cli({"rerun", csv + ".manifest.json", "--out-dir", (dir / "again").string()}) == 0;
  ok &= slurp(csv) == slurp(dir / "again" / "eff.csv");
  fs::remove_all(dir);
  report(10, ok, "simulate and experiment outputs regenerated byte-identically from manifests");
}

}  // namespace

int main() {
  engine_equivalence();
  pruning_exactness();
  small_delay_limit();
  convergence();
  distribution_agreement();
  mixture_bound();
  degenerate_cases();
  hand_trace();
  scaling();
  reproducibility();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
