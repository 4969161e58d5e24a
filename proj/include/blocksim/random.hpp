#pragma once

#include <cstdint>
#include <vector>

namespace blocksim {

/// 64-bit avalanche finalizer (SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the substream identified by (base_seed, stream_id).
constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed,
                                           std::uint64_t stream_id) noexcept {
  return mix64(base_seed ^ mix64(stream_id));
}

/// Maps 64 random bits onto the open interval (0, 1).
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// A source of uniform draws on (0, 1).
///
/// Every distribution sample consumes exactly one uniform, so two engines
/// reading the same source stay aligned draw for draw. `at()` reads the
/// draw at an absolute position without moving the cursor; the unbounded
/// engine uses it to give each (block, candidate) pair its own draw.
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  virtual double next() = 0;
  virtual double at(std::uint64_t position) const = 0;
  virtual std::uint64_t position() const = 0;
};

/// Counter-based SplitMix64 stream: draw p is mix(seed + p * gamma), so
/// random access costs the same as sequential access.
class SampleStream final : public UniformSource {
 public:
  SampleStream(std::uint64_t base_seed, std::uint64_t stream_id) noexcept
      : base_seed_(base_seed),
        stream_id_(stream_id),
        seed_(derive_stream_seed(base_seed, stream_id)) {}

  double next() override { return at(position_++); }

  double at(std::uint64_t position) const override {
    return to_open_unit(bits_at(position));
  }

  std::uint64_t position() const override { return position_; }

  std::uint64_t bits_at(std::uint64_t position) const noexcept {
    return mix64(seed_ + position * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t base_seed() const noexcept { return base_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t base_seed_;
  std::uint64_t stream_id_;
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

/// Replays a fixed list of uniforms (cycling). Test injection only.
class ScriptedStream final : public UniformSource {
 public:
  explicit ScriptedStream(std::vector<double> values) : values_(std::move(values)) {}

  double next() override { return at(position_++); }
  double at(std::uint64_t position) const override {
    return values_[position % values_.size()];
  }
  std::uint64_t position() const override { return position_; }

 private:
  std::vector<double> values_;
  std::uint64_t position_ = 0;
};

/// Stream roles within one simulation run.
enum class StreamRole : std::uint64_t { production = 0, producer = 1, delay = 2 };

inline constexpr std::uint64_t kRolesPerRun = 3;

/// stream_id of a role within run `run_index`.
constexpr std::uint64_t stream_id_for(std::uint64_t run_index, StreamRole role) noexcept {
  return run_index * kRolesPerRun + static_cast<std::uint64_t>(role);
}

/// The three aligned substreams one run consumes.
struct RunStreams {
  UniformSource& production;
  UniformSource& producer;
  UniformSource& delay;
};

/// Owns the three SampleStreams of run `run_index` under `base_seed`.
class OwnedRunStreams {
 public:
  OwnedRunStreams(std::uint64_t base_seed, std::uint64_t run_index) noexcept
      : production_(base_seed, stream_id_for(run_index, StreamRole::production)),
        producer_(base_seed, stream_id_for(run_index, StreamRole::producer)),
        delay_(base_seed, stream_id_for(run_index, StreamRole::delay)) {}

  OwnedRunStreams(const OwnedRunStreams&) = delete;
  OwnedRunStreams& operator=(const OwnedRunStreams&) = delete;

  RunStreams view() noexcept { return {production_, producer_, delay_}; }

  std::vector<std::uint64_t> seeds() const {
    return {production_.seed(), producer_.seed(), delay_.seed()};
  }

 private:
  SampleStream production_;
  SampleStream producer_;
  SampleStream delay_;
};

/// Worker index in [0, m) from one uniform.
inline std::size_t pick_worker(double u, std::size_t m) noexcept {
  auto j = static_cast<std::size_t>(u * static_cast<double>(m));
  return j < m ? j : m - 1;
}

}  // namespace blocksim
