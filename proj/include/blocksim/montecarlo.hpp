#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blocksim/random.hpp"
#include "blocksim/simulation.hpp"

namespace blocksim {

enum class Engine { network, matrix, infinite };

std::string_view engine_name(Engine engine);
Engine parse_engine(std::string_view name);

/// Engine-independent description of one simulated system.
struct ModelConfig {
  Engine engine = Engine::infinite;
  std::size_t m = 1;  // ignored by the infinite engine
  std::size_t n = 1000;
  DistributionSpec alpha = make_exponential(1.0);
  DistributionSpec beta = make_exponential(0.1);
  bool use_pruning = true;  // infinite engine only

  void validate() const;
  NetSimConfig net(std::uint64_t seed) const;
  InfSimConfig inf(std::uint64_t seed) const;
};

/// One run of the selected engine on explicit streams.
SimOutcome run_engine(const ModelConfig& config, RunStreams streams);

/// Summary of R replications.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t replications = 0;
  std::vector<double> per_rep_values;  // filled when requested
};

McEstimate summarize(std::vector<double> values, bool keep_values = false);

/// Replication `index` failed; `what()` names the index.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::size_t index, const std::string& message)
      : std::runtime_error("replication " + std::to_string(index) + ": " + message),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// p_n of R runs; run r consumes the streams of run index r under
/// base_seed. Up to `jobs` runs execute concurrently; results are stored
/// by index, so the output does not depend on `jobs`.
std::vector<double> replicate(const ModelConfig& config, std::size_t replications,
                              std::uint64_t base_seed, unsigned jobs = 1);

McEstimate run_replications(const ModelConfig& config, std::size_t replications,
                            std::uint64_t base_seed, unsigned jobs = 1,
                            bool keep_values = false);

/// Seed for sweep point `point` of an experiment seeded with base_seed.
constexpr std::uint64_t point_seed(std::uint64_t base_seed, std::uint64_t point) noexcept {
  return derive_stream_seed(base_seed, ~point);
}

}  // namespace blocksim
