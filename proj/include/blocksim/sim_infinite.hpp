#pragma once

#include "blocksim/random.hpp"
#include "blocksim/simulation.hpp"

namespace blocksim {

/// Position in the delay stream of the draw used when block k tests the
/// visibility of block i (i < k). Pairs are laid out step by step with i
/// descending, so a pruned scan reads a prefix of each step's block.
constexpr std::uint64_t pair_draw_position(std::uint64_t k, std::uint64_t i) noexcept {
  return k * (k - 1) / 2 + (k - 1 - i);
}

/// Unbounded-workers approximation: the delay matrix is replaced by a
/// fresh delay draw for every (k, i) visibility test, which drops the
/// dependence on m and ignores hysteresis of fixed matrix entries.
///
/// Draws are addressed by pair_draw_position, so the pruned and full scans
/// see the same delay for every pair they both test and return identical
/// height series. The producer stream is unused.
SimOutcome simulate_infinite(const InfSimConfig& config);
SimOutcome simulate_infinite(const InfSimConfig& config, RunStreams streams);

}  // namespace blocksim
