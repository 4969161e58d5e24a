#include "blocksim/sim_infinite.hpp"

#include <algorithm>
#include <limits>

namespace blocksim {

void InfSimConfig::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (n - 1 > std::numeric_limits<BlockId>::max()) throw ConfigError("n too large");
  blocksim::validate(alpha, DistRole::production);
  blocksim::validate(beta, DistRole::delay);
}

SimOutcome simulate_infinite(const InfSimConfig& config) {
  OwnedRunStreams owned(config.seed, 0);
  auto outcome = simulate_infinite(config, owned.view());
  outcome.seed_used = owned.seeds();
  return outcome;
}

SimOutcome simulate_infinite(const InfSimConfig& config, RunStreams streams) {
  config.validate();
  const std::size_t n = config.n;
  const UniformSource& delays = streams.delay;

  std::vector<double> t;
  std::vector<std::uint32_t> h;
  std::vector<std::uint32_t> z;
  t.reserve(n);
  h.reserve(n);
  z.reserve(n);
  t.push_back(0.0);
  h.push_back(1);
  z.push_back(1);

  std::uint64_t scanned = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double t_k = t.back() + sample(config.alpha, streams.production);
    std::uint32_t best = 1;
    std::uint64_t pos = pair_draw_position(k, k - 1);
    for (std::size_t i = k; i-- > 0; ++pos) {
      if (config.use_pruning && best >= z[i]) break;
      ++scanned;
      if (h[i] > best && t[i] + quantile(config.beta, delays.at(pos)) < t_k) best = h[i];
    }
    t.push_back(t_k);
    h.push_back(best + 1);
    z.push_back(std::max(z.back(), best + 1));
  }

  SimOutcome out;
  out.n = n;
  out.final_height = z.back();
  out.p_n = static_cast<double>(out.final_height) / static_cast<double>(n);
  out.scanned = scanned;
  if (config.record_series) out.series = HeightSeries{std::move(t), std::move(h), std::move(z)};
  return out;
}

}  // namespace blocksim
