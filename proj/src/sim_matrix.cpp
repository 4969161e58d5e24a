#include "blocksim/sim_matrix.hpp"

#include <algorithm>

namespace blocksim {

namespace {

inline bool visible(double t_i, double d, double t_k, Visibility mode) noexcept {
  return mode == Visibility::strict ? t_i + d < t_k : t_i + d <= t_k;
}

}  // namespace

ScanResult visible_height_naive(const MatrixSimState& state, std::size_t k, std::size_t j,
                                double t_k) {
  std::uint32_t best = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (visible(state.t[i], state.delay(i, j), t_k, Visibility::strict)) {
      best = std::max(best, state.h[i]);
    }
  }
  return {best + 1, k};
}

ScanResult visible_height_pruned(const MatrixSimState& state, std::size_t k, std::size_t j,
                                 double t_k, Visibility visibility) {
  std::uint32_t best = 1;
  std::uint64_t scanned = 0;
  // z is a running max: once best >= z_i no block at or before i can beat it.
  for (std::size_t i = k; i-- > 0 && best < state.z[i];) {
    ++scanned;
    if (state.h[i] > best && visible(state.t[i], state.delay(i, j), t_k, visibility)) {
      best = state.h[i];
    }
  }
  return {best + 1, scanned};
}

MatrixSimulator::MatrixSimulator(const NetSimConfig& config, RunStreams streams,
                                 MatrixSimOptions options)
    : config_(config), streams_(streams), options_(options), state_(config.m) {
  config_.validate();
  state_.t.reserve(config_.n);
  state_.h.reserve(config_.n);
  state_.z.reserve(config_.n);
  state_.producer.reserve(config_.n);
  state_.delays.reserve(config_.n * config_.m);
}

StepTrace MatrixSimulator::step() {
  StepTrace trace;
  const std::size_t k = state_.blocks();
  const std::size_t m = config_.m;
  const std::size_t j = pick_worker(streams_.producer.next(), m);
  const double t_k = state_.t.back() + sample(config_.alpha, streams_.production);

  trace.k = k;
  trace.producer = j;
  if (options_.scan == ScanMode::naive) {
    auto r = visible_height_naive(state_, k, j, t_k);
    trace.height = r.height;
    trace.scanned = r.scanned;
  } else {
    auto r = visible_height_pruned(state_, k, j, t_k, options_.pruned_visibility);
    trace.height = r.height;
    trace.scanned = r.scanned;
    if (options_.scan == ScanMode::both) {
      trace.naive_height = visible_height_naive(state_, k, j, t_k).height;
    }
  }
  scanned_ += trace.scanned;

  state_.t.push_back(t_k);
  state_.h.push_back(trace.height);
  state_.z.push_back(std::max(state_.z.back(), trace.height));
  state_.producer.push_back(static_cast<std::uint32_t>(j));
  for (std::size_t i = 0; i < m; ++i) {
    state_.delays.push_back(i == j ? 0.0 : sample(config_.beta, streams_.delay));
  }
  return trace;
}

SimOutcome MatrixSimulator::finish() {
  while (!done()) step();
  SimOutcome out;
  out.n = config_.n;
  out.final_height = state_.z.back();
  out.p_n = static_cast<double>(out.final_height) / static_cast<double>(config_.n);
  out.scanned = scanned_;
  if (config_.record_series) out.series = HeightSeries{state_.t, state_.h, state_.z};
  return out;
}

SimOutcome simulate_matrix(const NetSimConfig& config) {
  OwnedRunStreams owned(config.seed, 0);
  auto outcome = simulate_matrix(config, owned.view());
  outcome.seed_used = owned.seeds();
  return outcome;
}

SimOutcome simulate_matrix(const NetSimConfig& config, RunStreams streams) {
  return MatrixSimulator(config, streams).finish();
}

}  // namespace blocksim
