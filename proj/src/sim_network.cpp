#include "blocksim/sim_network.hpp"

#include <algorithm>
#include <limits>

namespace blocksim {

void NetSimConfig::validate() const {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (n < 1) throw ConfigError("n must be >= 1");
  if (n - 1 > std::numeric_limits<BlockId>::max()) throw ConfigError("n too large");
  blocksim::validate(alpha, DistRole::production);
  blocksim::validate(beta, DistRole::delay);
}

std::size_t delivery_sweep(MessageQueue& queue, double now, Workers& workers) {
  std::size_t delivered = 0;
  while (!queue.empty() && queue.top().arrival_time < now) {
    const Message msg = queue.top();
    queue.pop();
    if (msg.tip_height > workers.height[msg.recipient]) {
      workers.height[msg.recipient] = msg.tip_height;
      workers.tip[msg.recipient] = msg.tip;
    }
    ++delivered;
  }
  return delivered;
}

SimOutcome simulate_network(const NetSimConfig& config) {
  OwnedRunStreams owned(config.seed, 0);
  auto outcome = simulate_network(config, owned.view());
  outcome.seed_used = owned.seeds();
  return outcome;
}

SimOutcome simulate_network(const NetSimConfig& config, RunStreams streams) {
  config.validate();
  const std::size_t m = config.m;
  const std::size_t n = config.n;

  Workers workers(m);
  MessageQueue queue;
  std::uint64_t sequence = 0;
  std::uint32_t best = 1;
  double t = 0.0;

  SimOutcome out;
  out.n = n;
  if (config.record_tree) {
    out.tree.emplace();
    out.tree->parents.reserve(n - 1);
    out.tree->producers.reserve(n - 1);
    out.tree->times.reserve(n);
  }
  if (config.record_series) {
    out.series.emplace();
    out.series->t.push_back(0.0);
    out.series->h.push_back(1);
    out.series->z.push_back(1);
  }

  for (std::size_t k = 1; k < n; ++k) {
    t += sample(config.alpha, streams.production);
    delivery_sweep(queue, t, workers);

    const std::size_t j = pick_worker(streams.producer.next(), m);
    const auto block = static_cast<BlockId>(k);
    const std::uint32_t h = workers.height[j] + 1;
    if (out.tree) out.tree->append(workers.tip[j], static_cast<std::uint32_t>(j), t);
    workers.tip[j] = block;
    workers.height[j] = h;
    best = std::max(best, h);

    for (std::size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      queue.push({t + sample(config.beta, streams.delay), sequence++,
                  static_cast<std::uint32_t>(i), block, h});
    }

    if (out.series) {
      out.series->t.push_back(t);
      out.series->h.push_back(h);
      out.series->z.push_back(best);
    }
  }

  out.final_height = best;
  out.p_n = static_cast<double>(best) / static_cast<double>(n);
  return out;
}

}  // namespace blocksim
