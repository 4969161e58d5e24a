#include "blocksim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blocksim/distributions.hpp"
#include "blocksim/sim_infinite.hpp"
#include "blocksim/sim_network.hpp"

namespace blocksim {

namespace {

constexpr std::size_t kMaxDetails = 5;

void fail(SuiteReport& report, const std::string& what) {
  ++report.failures;
  if (report.details.size() < kMaxDetails) report.details.push_back(what);
}

std::string describe(const NetSimConfig& c) {
  std::ostringstream out;
  out << "m=" << c.m << " n=" << c.n << " alpha=" << format_distribution(c.alpha)
      << " beta=" << format_distribution(c.beta) << " seed=" << c.seed;
  return out.str();
}

/// Random bounded configs plus one with integral times where visibility
/// ties occur (constant production time 1, constant delay 2).
std::vector<NetSimConfig> sample_configs(const ValidationOptions& options,
                                         const std::vector<double>& ratios) {
  SampleStream rng(options.seed, 0x5eed);
  std::vector<NetSimConfig> configs;
  for (std::size_t c = 0; c < options.random_configs; ++c) {
    NetSimConfig cfg;
    cfg.m = 2 + pick_worker(rng.next(), 19);
    cfg.n = 10 + pick_worker(rng.next(), std::max<std::size_t>(options.max_n, 10) - 9);
    const double alpha_mean = 0.5 + 1.5 * rng.next();
    cfg.alpha = make_exponential(alpha_mean);
    const double beta_mean = ratios[c % ratios.size()] * alpha_mean;
    switch (c % 3) {
      case 0: cfg.beta = make_exponential(beta_mean); break;
      case 1: cfg.beta = make_gamma(beta_mean, 0.5 + 4.5 * rng.next()); break;
      default: cfg.beta = make_constant(beta_mean); break;
    }
    cfg.seed = rng.bits_at(1000 + c);
    cfg.record_series = true;
    configs.push_back(cfg);
  }
  NetSimConfig ties;
  ties.m = 3;
  ties.n = 60;
  ties.alpha = make_constant(1.0);
  ties.beta = make_constant(2.0);
  ties.seed = options.seed;
  ties.record_series = true;
  configs.push_back(ties);
  return configs;
}

}  // namespace

SuiteReport check_engine_equivalence(const ValidationOptions& options) {
  SuiteReport report;
  report.name = "network == matrix (shared streams)";
  for (const auto& cfg : sample_configs(options, {0.01, 0.1, 1.0, 10.0})) {
    ++report.cases;
    OwnedRunStreams a(cfg.seed, 0);
    OwnedRunStreams b(cfg.seed, 0);
    const auto net = simulate_network(cfg, a.view());
    MatrixSimulator sim(cfg, b.view(), {ScanMode::pruned, options.pruned_visibility});
    const auto mat = sim.finish();
    if (net.p_n != mat.p_n || net.series->h != mat.series->h) {
      fail(report, describe(cfg) + ": p_n " + std::to_string(net.p_n) + " vs " +
                       std::to_string(mat.p_n));
    }
  }
  return report;
}

SuiteReport check_pruning_exactness(const ValidationOptions& options) {
  SuiteReport report;
  report.name = "pruned scan == naive scan (every step)";
  for (const auto& cfg : sample_configs(options, {0.01, 1.0, 10.0})) {
    ++report.cases;
    OwnedRunStreams streams(cfg.seed, 0);
    MatrixSimulator sim(cfg, streams.view(), {ScanMode::both, options.pruned_visibility});
    while (!sim.done()) {
      const auto step = sim.step();
      if (step.height != *step.naive_height) {
        fail(report, describe(cfg) + ": step " + std::to_string(step.k) + " pruned " +
                         std::to_string(step.height) + " naive " +
                         std::to_string(*step.naive_height));
        break;
      }
    }
  }
  return report;
}

SuiteReport check_infinite_pruning(const ValidationOptions& options) {
  SuiteReport report;
  report.name = "unbounded engine: pruned == full scan";
  for (const auto& net : sample_configs(options, {0.01, 0.1, 1.0, 10.0})) {
    ++report.cases;
    InfSimConfig cfg;
    cfg.n = net.n;
    cfg.alpha = net.alpha;
    cfg.beta = net.beta;
    cfg.seed = net.seed;
    cfg.record_series = true;
    cfg.use_pruning = true;
    const auto pruned = simulate_infinite(cfg);
    cfg.use_pruning = false;
    const auto full = simulate_infinite(cfg);
    if (pruned.series->h != full.series->h || pruned.p_n != full.p_n) {
      fail(report, describe(net) + ": series differ");
    }
  }
  return report;
}

SuiteReport check_mixture_bound(std::size_t grid_points) {
  SuiteReport report;
  report.name = "mixture CDF within 2/m of the delay CDF";
  std::vector<DistributionSpec> specs{make_exponential(1.0), make_exponential(0.1),
                                      make_chi_squared(1.0), make_chi_squared(2.0),
                                      make_chi_squared(5.0), make_constant(1.0),
                                      make_constant(0.0)};
  for (double k : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) specs.push_back(make_gamma(1.0, k));

  for (const auto& spec : specs) {
    const double hi = spec.kind == DistKind::constant ? 2.0 * spec.mean + 1.0
                                                     : 1.5 * quantile(spec, 1.0 - 1e-12);
    const double lo = -0.1 * hi;
    for (std::size_t m : {1u, 2u, 10u, 100u}) {
      ++report.cases;
      double sup = 0.0;
      for (std::size_t g = 0; g < grid_points; ++g) {
        const double r = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid_points - 1);
        sup = std::max(sup, std::abs(mixture_cdf(spec, m, r) - cdf(spec, r)));
      }
      if (sup > sup_gap_bound(m)) {
        fail(report, format_distribution(spec) + " m=" + std::to_string(m) +
                         ": sup=" + std::to_string(sup));
      }
    }
  }
  return report;
}

std::vector<SuiteReport> run_validation(const ValidationOptions& options) {
  return {check_engine_equivalence(options), check_pruning_exactness(options),
          check_infinite_pruning(options), check_mixture_bound()};
}

}  // namespace blocksim
