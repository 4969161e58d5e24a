#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blocksim/random.hpp"
#include "blocksim/simulation.hpp"

namespace blocksim {

/// Visibility test t_i + d < t_k. `non_strict` (<=) exists only as a
/// mutation hook for the validation suite.
enum class Visibility { strict, non_strict };

/// Recurrence state of the delay-matrix simulation.
///
/// Row k of `delays` holds the m delays after which each worker learns of
/// block k; the producer's entry is 0 and row 0 is all zeros. The origin
/// has t = 0 and h = z = 1.
struct MatrixSimState {
  std::size_t m = 1;
  std::vector<double> t{0.0};
  std::vector<std::uint32_t> h{1};
  std::vector<std::uint32_t> z{1};
  std::vector<std::uint32_t> producer{0};
  std::vector<double> delays;  // row-major, rows.size() * m

  explicit MatrixSimState(std::size_t workers) : m(workers), delays(workers, 0.0) {}

  std::size_t blocks() const noexcept { return h.size(); }

  double delay(std::size_t block, std::size_t worker) const noexcept {
    return delays[block * m + worker];
  }
};

struct ScanResult {
  std::uint32_t height = 2;
  std::uint64_t scanned = 0;
};

/// 1 + max h_i over blocks i < k visible to worker j at time t_k, by a
/// full scan of every earlier block.
ScanResult visible_height_naive(const MatrixSimState& state, std::size_t k, std::size_t j,
                                double t_k);

/// Same value as visible_height_naive, scanning i = k-1, k-2, ... and
/// stopping once the best height found reaches z_i.
ScanResult visible_height_pruned(const MatrixSimState& state, std::size_t k, std::size_t j,
                                 double t_k, Visibility visibility = Visibility::strict);

enum class ScanMode { pruned, naive, both };

struct MatrixSimOptions {
  ScanMode scan = ScanMode::pruned;
  Visibility pruned_visibility = Visibility::strict;
};

/// What one step produced. `naive_height` is set in ScanMode::both.
struct StepTrace {
  std::size_t k = 0;
  std::size_t producer = 0;
  std::uint32_t height = 0;
  std::optional<std::uint32_t> naive_height;
  std::uint64_t scanned = 0;
};

/// Step-wise delay-matrix simulation of m workers.
///
/// Per step: one producer draw, one production-time draw, then m - 1 delay
/// draws in worker order skipping the producer.
class MatrixSimulator {
 public:
  MatrixSimulator(const NetSimConfig& config, RunStreams streams, MatrixSimOptions options = {});

  bool done() const noexcept { return state_.blocks() >= config_.n; }

  /// Produces the next block. In ScanMode::both the stored height is the
  /// pruned one.
  StepTrace step();

  const MatrixSimState& state() const noexcept { return state_; }

  /// Runs the remaining steps and summarizes.
  SimOutcome finish();

 private:
  NetSimConfig config_;
  RunStreams streams_;
  MatrixSimOptions options_;
  MatrixSimState state_;
  std::uint64_t scanned_ = 0;
};

SimOutcome simulate_matrix(const NetSimConfig& config);
SimOutcome simulate_matrix(const NetSimConfig& config, RunStreams streams);

}  // namespace blocksim
