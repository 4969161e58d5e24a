#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "blocksim/blocktree.hpp"
#include "blocksim/distributions.hpp"

namespace blocksim {

/// Parameters of a bounded-workers run. `n` counts the origin.
struct NetSimConfig {
  std::size_t m = 1;
  std::size_t n = 1;
  DistributionSpec alpha = make_exponential(1.0);
  DistributionSpec beta = make_exponential(0.1);
  std::uint64_t seed = 0;
  bool record_tree = false;
  bool record_series = false;

  void validate() const;
};

/// Parameters of an unbounded-workers run.
struct InfSimConfig {
  std::size_t n = 1;
  DistributionSpec alpha = make_exponential(1.0);
  DistributionSpec beta = make_exponential(0.1);
  std::uint64_t seed = 0;
  bool use_pruning = true;
  bool record_series = false;

  void validate() const;
};

/// Per-block trajectory: creation time, height h_k and running max z_k.
struct HeightSeries {
  std::vector<double> t;
  std::vector<std::uint32_t> h;
  std::vector<std::uint32_t> z;
};

struct SimOutcome {
  double p_n = 1.0;
  std::uint32_t final_height = 1;
  std::size_t n = 1;
  std::optional<BlockTree> tree;
  std::optional<HeightSeries> series;
  /// Candidate blocks examined while computing heights (scan engines only).
  std::uint64_t scanned = 0;
  /// Derived seeds of the production, producer and delay streams.
  std::vector<std::uint64_t> seed_used;

  /// Average number of candidates examined per produced block.
  double mean_scan_length() const {
    return n > 1 ? static_cast<double>(scanned) / static_cast<double>(n - 1) : 0.0;
  }
};

}  // namespace blocksim
