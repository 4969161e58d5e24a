#pragma once

#include <queue>
#include <vector>

#include "blocksim/random.hpp"
#include "blocksim/simulation.hpp"

namespace blocksim {

/// Announcement of a worker's new tip, due at `arrival_time`.
///
/// Carries the tip id and its height instead of a copy of the chain:
/// adoption only compares lengths.
struct Message {
  double arrival_time = 0.0;
  std::uint64_t sequence = 0;  // push order, breaks arrival-time ties
  std::uint32_t recipient = 0;
  BlockId tip = 0;
  std::uint32_t tip_height = 1;
};

struct LaterMessage {
  bool operator()(const Message& a, const Message& b) const noexcept {
    if (a.arrival_time != b.arrival_time) return a.arrival_time > b.arrival_time;
    return a.sequence > b.sequence;
  }
};

using MessageQueue = std::priority_queue<Message, std::vector<Message>, LaterMessage>;

/// Local chain tips of all workers.
struct Workers {
  std::vector<BlockId> tip;
  std::vector<std::uint32_t> height;

  explicit Workers(std::size_t m) : tip(m, 0), height(m, 1) {}
};

/// Delivers every queued message with arrival_time < now. A recipient
/// adopts the announced tip only if it is strictly higher than its own.
/// Returns the number of messages delivered.
std::size_t delivery_sweep(MessageQueue& queue, double now, Workers& workers);

/// Priority-queue simulation of m workers under the longest-chain rule.
///
/// Step k draws one production time, one producer and then m - 1 delays in
/// recipient order (0..m-1, skipping the producer), each from its own
/// stream, which keeps it draw-aligned with simulate_matrix.
SimOutcome simulate_network(const NetSimConfig& config);
SimOutcome simulate_network(const NetSimConfig& config, RunStreams streams);

}  // namespace blocksim
