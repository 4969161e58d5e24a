#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blocksim/sim_matrix.hpp"

namespace blocksim {

/// Outcome of one self-check suite.
struct SuiteReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> details;  // first few failure descriptions

  bool passed() const noexcept { return cases > 0 && failures == 0; }
};

struct ValidationOptions {
  std::size_t random_configs = 20;
  std::size_t max_n = 500;
  std::uint64_t seed = 1;
  /// Visibility used by the pruned scan of the matrix engine. Anything but
  /// strict is a deliberate fault the suites must catch.
  Visibility pruned_visibility = Visibility::strict;
};

/// simulate_network and the matrix engine agree exactly (p_n and the full
/// height series) on shared streams.
SuiteReport check_engine_equivalence(const ValidationOptions& options);

/// The pruned scan returns the naive scan's height at every step.
SuiteReport check_pruning_exactness(const ValidationOptions& options);

/// Pruned and full scans of the unbounded engine give identical series.
SuiteReport check_infinite_pruning(const ValidationOptions& options);

/// sup_r |mixture_cdf - cdf| <= 2/m on a dense grid, every kind,
/// m in {1, 2, 10, 100}.
SuiteReport check_mixture_bound(std::size_t grid_points = 10000);

std::vector<SuiteReport> run_validation(const ValidationOptions& options);

}  // namespace blocksim
