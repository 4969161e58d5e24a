#include "blocksim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "blocksim/sim_infinite.hpp"
#include "blocksim/sim_matrix.hpp"
#include "blocksim/sim_network.hpp"
#include "blocksim/stats.hpp"

namespace blocksim {

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::network: return "network";
    case Engine::matrix: return "matrix";
    case Engine::infinite: return "infinite";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  if (name == "network") return Engine::network;
  if (name == "matrix") return Engine::matrix;
  if (name == "infinite") return Engine::infinite;
  throw ConfigError("unknown engine '" + std::string(name) + "' (network, matrix, infinite)");
}

void ModelConfig::validate() const {
  if (engine == Engine::infinite) {
    inf(0).validate();
  } else {
    net(0).validate();
  }
}

NetSimConfig ModelConfig::net(std::uint64_t seed) const {
  NetSimConfig c;
  c.m = m;
  c.n = n;
  c.alpha = alpha;
  c.beta = beta;
  c.seed = seed;
  return c;
}

InfSimConfig ModelConfig::inf(std::uint64_t seed) const {
  InfSimConfig c;
  c.n = n;
  c.alpha = alpha;
  c.beta = beta;
  c.seed = seed;
  c.use_pruning = use_pruning;
  return c;
}

SimOutcome run_engine(const ModelConfig& config, RunStreams streams) {
  switch (config.engine) {
    case Engine::network: return simulate_network(config.net(0), streams);
    case Engine::matrix: return simulate_matrix(config.net(0), streams);
    case Engine::infinite: return simulate_infinite(config.inf(0), streams);
  }
  throw ConfigError("unknown engine");
}

McEstimate summarize(std::vector<double> values, bool keep_values) {
  if (values.empty()) throw std::invalid_argument("summarize needs at least one value");
  McEstimate est;
  est.replications = values.size();
  // Index-order reduction keeps the mean reproducible.
  est.mean = stats::mean(values);
  est.std_error = stats::sample_sd(values) / std::sqrt(static_cast<double>(values.size()));
  if (keep_values) est.per_rep_values = values;
  std::sort(values.begin(), values.end());
  est.q25 = stats::quantile_sorted(values, 0.25);
  est.q50 = stats::quantile_sorted(values, 0.5);
  est.q75 = stats::quantile_sorted(values, 0.75);
  est.min = values.front();
  est.max = values.back();
  // Keep mean inside [min, max] despite rounding on constant samples.
  est.mean = std::clamp(est.mean, est.min, est.max);
  return est;
}

std::vector<double> replicate(const ModelConfig& config, std::size_t replications,
                              std::uint64_t base_seed, unsigned jobs) {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  config.validate();
  std::vector<double> values(replications);

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = replications;
  std::string failed_message;

  auto worker = [&] {
    for (std::size_t r = next++; r < replications; r = next++) {
      try {
        OwnedRunStreams streams(base_seed, r);
        values[r] = run_engine(config, streams.view()).p_n;
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (r < failed_index) {
          failed_index = r;
          failed_message = e.what();
        }
        next = replications;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(replications)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failed_index < replications) throw ReplicationError(failed_index, failed_message);
  return values;
}

McEstimate run_replications(const ModelConfig& config, std::size_t replications,
                            std::uint64_t base_seed, unsigned jobs, bool keep_values) {
  return summarize(replicate(config, replications, base_seed, jobs), keep_values);
}

}  // namespace blocksim
